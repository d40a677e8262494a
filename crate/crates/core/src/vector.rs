//! Sparse rational vectors over a basis, and over pairs of bases.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::scalar::Scalar;
use crate::space::Basis;

/// Finite rational combination of basis elements. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vector {
    terms: BTreeMap<Basis, Scalar>,
}

impl Vector {
    pub fn new() -> Self {
        Vector::default()
    }

    pub fn basis(b: Basis) -> Self {
        Self::term(b, crate::scalar::one())
    }

    pub fn term(b: Basis, c: Scalar) -> Self {
        let mut v = Vector::new();
        v.add_term(b, c);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Basis, Scalar)>) -> Self {
        let mut v = Vector::new();
        for (b, c) in terms {
            v.add_term(b, c);
        }
        v
    }

    pub fn add_term(&mut self, b: Basis, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Vector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (b, x) in &other.terms {
            self.add_term(*b, x * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::new();
        }
        Vector {
            terms: self.terms.iter().map(|(b, x)| (*b, x * c)).collect(),
        }
    }

    pub fn get(&self, b: Basis) -> Scalar {
        self.terms.get(&b).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Basis, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = Basis> + '_ {
        self.terms.keys().copied()
    }

    /// Keeps only the terms whose basis element satisfies `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(Basis) -> bool) -> Vector {
        Vector {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(**b))
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn leading(&self) -> Option<(Basis, &Scalar)> {
        self.terms.iter().next().map(|(b, c)| (*b, c))
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(*b, c.clone());
        }
        out
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(*b, -c.clone());
        }
        out
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector {
            terms: self.terms.iter().map(|(b, c)| (*b, -c.clone())).collect(),
        }
    }
}

impl FromIterator<(Basis, Scalar)> for Vector {
    fn from_iter<T: IntoIterator<Item = (Basis, Scalar)>>(iter: T) -> Self {
        Vector::from_terms(iter)
    }
}

/// Element of a tensor product `X ⊗ Y` kept as a combination of basis pairs,
/// without materializing the product space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairVector {
    terms: BTreeMap<(Basis, Basis), Scalar>,
}

impl PairVector {
    pub fn new() -> Self {
        PairVector::default()
    }

    pub fn add_term(&mut self, a: Basis, b: Basis, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    /// `self += c * (x ⊗ y)`.
    pub fn add_product(&mut self, x: &Vector, y: &Vector, c: &Scalar) {
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                self.add_term(*a, *b, ca * cb * c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &PairVector) {
        for ((a, b), c) in &other.terms {
            self.add_term(*a, *b, c.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Basis, Basis), &Scalar)> {
        self.terms.iter()
    }
}

impl Sub for &PairVector {
    type Output = PairVector;
    fn sub(self, rhs: &PairVector) -> PairVector {
        let mut out = self.clone();
        for ((a, b), c) in &rhs.terms {
            out.add_term(*a, *b, -c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn cancellation_removes_terms() {
        let b = Basis::new(0, 0);
        let mut v = Vector::term(b, frac(1, 2));
        v.add_term(b, frac(-1, 2));
        assert!(v.is_zero());
        let w = Vector::term(b, int(3));
        assert!((&w - &w).is_zero());
        assert_eq!(&w + &(-&w), Vector::new());
    }

    #[test]
    fn pair_products() {
        let x = Basis::new(0, 0);
        let y = Basis::new(1, 0);
        let v = Vector::from_terms([(x, int(1)), (y, int(2))]);
        let mut p = PairVector::new();
        p.add_product(&v, &v, &int(1));
        let mut q = PairVector::new();
        q.add_term(x, x, int(1));
        q.add_term(x, y, int(2));
        q.add_term(y, x, int(2));
        q.add_term(y, y, int(4));
        assert_eq!(p, q);
    }
}
