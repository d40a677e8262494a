//! Designated subspaces of a graded space, with exact membership tests.

use crate::error::{Error, Result};
use crate::scalar;
use crate::space::{Basis, SpaceRef};
use crate::symmetric;
use crate::vector::Vector;

/// A subspace given by spanning vectors, kept in echelon form: every row has a
/// distinct pivot with coefficient 1 and vanishes at the pivots of earlier rows.
#[derive(Clone, Debug)]
pub struct Span {
    space: SpaceRef,
    rows: Vec<(Basis, Vector)>,
    basis: Vec<Vector>,
}

impl Span {
    pub fn zero(space: &SpaceRef) -> Self {
        Span {
            space: space.clone(),
            rows: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn new(space: &SpaceRef, vectors: impl IntoIterator<Item = Vector>) -> Result<Self> {
        let mut span = Span::zero(space);
        for v in vectors {
            if let Some(b) = v.support().find(|b| !space.contains(*b)) {
                return Err(Error::InvalidSpace(format!("vector component {b:?} outside the space")));
            }
            span.insert(v);
        }
        Ok(span)
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: Vector) -> bool {
        let r = self.reduce(&v);
        let Some((pivot, c)) = r.leading() else {
            return false;
        };
        let row = r.scaled(&(scalar::one() / c));
        self.rows.push((pivot, row));
        self.basis.push(v);
        true
    }

    /// Remainder of `v` after eliminating every pivot.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut r = v.clone();
        for (pivot, row) in &self.rows {
            let c = r.get(*pivot);
            if !num_traits::Zero::is_zero(&c) {
                r.add_scaled(row, &-c);
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// A linearly independent subset of the vectors given at construction.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }
}

/// A subspace `A ⊂ N` on which relative statements are checked.
#[derive(Clone, Debug)]
pub enum Subspace {
    Whole(SpaceRef),
    Span(Span),
    /// The symmetric tensors of a word space.
    Symmetric(SpaceRef),
}

impl Subspace {
    pub fn space(&self) -> &SpaceRef {
        match self {
            Subspace::Whole(s) | Subspace::Symmetric(s) => s,
            Subspace::Span(span) => span.space(),
        }
    }

    pub fn contains(&self, v: &Vector) -> bool {
        match self {
            Subspace::Whole(_) => true,
            Subspace::Span(span) => span.contains(v),
            Subspace::Symmetric(s) => symmetric::is_invariant(s, v),
        }
    }

    /// Vectors spanning the subspace.
    pub fn spanning(&self) -> Vec<Vector> {
        match self {
            Subspace::Whole(s) => s.basis().into_iter().map(Vector::basis).collect(),
            Subspace::Span(span) => span.basis().to_vec(),
            Subspace::Symmetric(s) => symmetric::invariant_vectors(s),
        }
    }

    pub fn is_whole(&self) -> bool {
        matches!(self, Subspace::Whole(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::space::GradedSpace;

    #[test]
    fn span_membership() {
        let s = GradedSpace::from_labels(&[(0, &["x", "y", "z"])]).unwrap();
        let (x, y, z) = (Basis::new(0, 0), Basis::new(0, 1), Basis::new(0, 2));
        let v1 = Vector::from_terms([(x, int(1)), (y, int(1))]);
        let v2 = Vector::from_terms([(y, int(2)), (z, int(1))]);
        let mut span = Span::new(&s, [v1.clone(), v2.clone()]).unwrap();
        assert_eq!(span.dim(), 2);
        let w = &v1.scaled(&int(3)) - &v2;
        assert!(span.contains(&w));
        assert!(!span.contains(&Vector::basis(z)));
        assert!(!span.insert(w));
        assert!(span.insert(Vector::basis(z)));
        assert!(span.contains(&Vector::basis(x)));
    }

    #[test]
    fn symmetric_membership() {
        let v = GradedSpace::from_labels(&[(-1, &["a", "b"])]).unwrap();
        let s = GradedSpace::words(&v, 1, 2);
        let sub = Subspace::Symmetric(s.clone());
        let (a, b) = (Basis::new(-1, 0), Basis::new(-1, 1));
        let ab = s.word_basis(&[a, b]).unwrap();
        let ba = s.word_basis(&[b, a]).unwrap();
        assert!(sub.contains(&Vector::from_terms([(ab, int(1)), (ba, int(-1))])));
        assert!(!sub.contains(&Vector::basis(ab)));
        assert_eq!(sub.spanning().len(), 3);
    }
}
