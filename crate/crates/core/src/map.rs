//! Degree-homogeneous linear maps between graded spaces.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec;
use crate::scalar::{self, Scalar};
use crate::space::{same_space, Basis, GradedSpace, SpaceRef};
use crate::vector::Vector;

type Column = Vec<(usize, Scalar)>;

/// A linear map of fixed degree `k`, stored per source degree `d` as the sparse
/// images of the basis vectors of degree `d` in the target component `d + k`.
/// Blocks that are entirely zero are not stored, so structural equality is
/// equality of maps.
#[derive(Clone)]
pub struct GradedMap {
    source: SpaceRef,
    target: SpaceRef,
    degree: i32,
    blocks: BTreeMap<i32, Vec<Column>>,
}

impl GradedMap {
    pub fn zero(source: &SpaceRef, target: &SpaceRef, degree: i32) -> Self {
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(space: &SpaceRef) -> Self {
        Self::from_fn(space, space, 0, Vector::basis)
    }

    /// Builds a map from the image of every source basis vector.
    ///
    /// Panics if an image has a component outside the target degree
    /// `b.degree + degree`; callers construct images by rules that guarantee it.
    pub fn from_fn<F>(source: &SpaceRef, target: &SpaceRef, degree: i32, f: F) -> Self
    where
        F: Fn(Basis) -> Vector + Sync + Send,
    {
        let basis = source.basis();
        let images = exec::map_indexed(&basis, |&b| f(b));
        Self::from_images(source, target, degree, basis.into_iter().zip(images))
    }

    /// Fallible variant of [`GradedMap::from_fn`].
    pub fn try_from_fn<F>(source: &SpaceRef, target: &SpaceRef, degree: i32, f: F) -> Result<Self>
    where
        F: Fn(Basis) -> Result<Vector> + Sync + Send,
    {
        let basis = source.basis();
        let images = exec::try_map_indexed(&basis, |&b| f(b))?;
        Ok(Self::from_images(source, target, degree, basis.into_iter().zip(images)))
    }

    fn from_images(
        source: &SpaceRef,
        target: &SpaceRef,
        degree: i32,
        images: impl Iterator<Item = (Basis, Vector)>,
    ) -> Self {
        let mut blocks: BTreeMap<i32, Vec<Column>> = BTreeMap::new();
        for (b, img) in images {
            if img.is_zero() {
                continue;
            }
            let width = source.dim(b.degree);
            let block = blocks
                .entry(b.degree)
                .or_insert_with(|| vec![Vec::new(); width]);
            let col = img
                .iter()
                .map(|(t, c)| {
                    assert!(
                        t.degree == b.degree + degree && target.contains(*t),
                        "image of {b:?} has component {t:?} outside target degree {}",
                        b.degree + degree
                    );
                    (t.index, c.clone())
                })
                .collect();
            block[b.index] = col;
        }
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks,
        }
    }

    /// Builds a map from `(source basis, target basis, coefficient)` entries,
    /// validating degrees and indices. Repeated entries are summed.
    pub fn from_entries(
        source: &SpaceRef,
        target: &SpaceRef,
        degree: i32,
        entries: impl IntoIterator<Item = (Basis, Basis, Scalar)>,
    ) -> Result<Self> {
        let mut images: BTreeMap<Basis, Vector> = BTreeMap::new();
        for (s, t, c) in entries {
            if !source.contains(s) {
                return Err(Error::InvalidMap(format!("source basis {s:?} out of range")));
            }
            if !target.contains(t) {
                return Err(Error::InvalidMap(format!("target basis {t:?} out of range")));
            }
            if t.degree != s.degree + degree {
                return Err(Error::InvalidMap(format!(
                    "entry {} -> {} does not have degree {degree}",
                    source.label(s),
                    target.label(t)
                )));
            }
            images.entry(s).or_default().add_term(t, c);
        }
        Ok(Self::from_images(source, target, degree, images.into_iter()))
    }

    pub fn source(&self) -> &SpaceRef {
        &self.source
    }

    pub fn target(&self) -> &SpaceRef {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Image of a single basis vector.
    pub fn image(&self, b: Basis) -> Vector {
        let mut out = Vector::new();
        self.accumulate(b, &scalar::one(), &mut out);
        out
    }

    fn accumulate(&self, b: Basis, c: &Scalar, out: &mut Vector) {
        if let Some(block) = self.blocks.get(&b.degree) {
            let td = b.degree + self.degree;
            for (i, x) in &block[b.index] {
                out.add_term(Basis::new(td, *i), x * c);
            }
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (b, c) in v.iter() {
            self.accumulate(*b, c, &mut out);
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GradedMap) -> Result<GradedMap> {
        if !same_space(&inner.target, &self.source) {
            return Err(Error::SpaceMismatch(format!(
                "cannot compose: inner target {:?} differs from outer source {:?}",
                inner.target, self.source
            )));
        }
        Ok(GradedMap::from_fn(
            &inner.source,
            &self.target,
            self.degree + inner.degree,
            |b| self.apply(&inner.image(b)),
        ))
    }

    fn check_parallel(&self, other: &GradedMap, op: &str) -> Result<()> {
        if !same_space(&self.source, &other.source) || !same_space(&self.target, &other.target) {
            return Err(Error::SpaceMismatch(format!("{op}: maps act between different spaces")));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "{op}: degrees {} and {} differ",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.check_parallel(other, "add")?;
        Ok(GradedMap::from_fn(&self.source, &self.target, self.degree, |b| {
            &self.image(b) + &other.image(b)
        }))
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.check_parallel(other, "sub")?;
        Ok(GradedMap::from_fn(&self.source, &self.target, self.degree, |b| {
            &self.image(b) - &other.image(b)
        }))
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        GradedMap::from_fn(&self.source, &self.target, self.degree, |b| {
            self.image(b).scaled(c)
        })
    }

    pub fn neg(&self) -> GradedMap {
        self.scale(&-scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// First basis vector (in basis order) with a nonzero image.
    pub fn nonzero_witness(&self) -> Option<(Basis, Vector)> {
        self.blocks.iter().find_map(|(&d, cols)| {
            cols.iter()
                .position(|c| !c.is_empty())
                .map(|i| (Basis::new(d, i), self.image(Basis::new(d, i))))
        })
    }

    /// First basis vector on which `self` and `other` differ.
    pub fn difference_witness(&self, other: &GradedMap) -> Option<(Basis, Vector, Vector)> {
        self.source
            .basis()
            .into_iter()
            .map(|b| (b, self.image(b), other.image(b)))
            .find(|(_, x, y)| x != y)
    }

    /// All nonzero entries as `(source, target, coefficient)`, in basis order.
    pub fn entries(&self) -> Vec<(Basis, Basis, Scalar)> {
        let mut out = Vec::new();
        for (&d, cols) in &self.blocks {
            for (i, col) in cols.iter().enumerate() {
                for (t, c) in col {
                    out.push((Basis::new(d, i), Basis::new(d + self.degree, *t), c.clone()));
                }
            }
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.blocks.values().flatten().map(Vec::len).sum()
    }

    /// The same matrix reinterpreted between structurally equal spaces.
    pub fn with_spaces(&self, source: &SpaceRef, target: &SpaceRef) -> Result<GradedMap> {
        if !same_space(source, &self.source) || !same_space(target, &self.target) {
            return Err(Error::SpaceMismatch("with_spaces: spaces differ".into()));
        }
        Ok(GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree: self.degree,
            blocks: self.blocks.clone(),
        })
    }

    /// Restricts the map to the source basis vectors accepted by `keep`.
    pub fn restrict_columns(&self, keep: impl Fn(Basis) -> bool + Sync + Send) -> GradedMap {
        GradedMap::from_fn(&self.source, &self.target, self.degree, |b| {
            if keep(b) {
                self.image(b)
            } else {
                Vector::new()
            }
        })
    }
}

impl PartialEq for GradedMap {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && same_space(&self.source, &other.source)
            && same_space(&self.target, &other.target)
            && self.blocks == other.blocks
    }
}

impl fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GradedMap(degree {})", self.degree)?;
        for (s, t, c) in self.entries() {
            writeln!(
                f,
                "  {} -> {} : {}",
                self.source.label(s),
                self.target.label(t),
                scalar::format(&c)
            )?;
        }
        Ok(())
    }
}

/// `g ∘ f`.
pub fn compose_maps(g: &GradedMap, f: &GradedMap) -> Result<GradedMap> {
    g.compose(f)
}

/// `f ⊗ g` on `f.source ⊗ g.source`, with the Koszul rule
/// `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)`.
pub fn tensor_maps(f: &GradedMap, g: &GradedMap) -> GradedMap {
    let source = GradedSpace::tensor(f.source(), g.source());
    let target = GradedSpace::tensor(f.target(), g.target());
    tensor_maps_between(f, g, &source, &target)
}

/// [`tensor_maps`] with caller-supplied (already built) product spaces.
pub fn tensor_maps_between(
    f: &GradedMap,
    g: &GradedMap,
    source: &SpaceRef,
    target: &SpaceRef,
) -> GradedMap {
    let g_odd = g.degree().rem_euclid(2) == 1;
    GradedMap::from_fn(source, target, f.degree() + g.degree(), |b| {
        let (x, y) = source.pair(b).expect("tensor source");
        let fx = f.image(x);
        let gy = g.image(y);
        let sign = scalar::sign(g_odd && x.is_odd());
        let mut out = Vector::new();
        for (a, ca) in fx.iter() {
            for (c, cc) in gy.iter() {
                let t = target.pair_basis(*a, *c).expect("tensor target");
                out.add_term(t, ca * cc * &sign);
            }
        }
        out
    })
}

/// Dense view of one block, rows indexed by target, used in diagnostics and tests.
pub fn dense_block(map: &GradedMap, source_degree: i32) -> Vec<Vec<Scalar>> {
    let rows = map.target().dim(source_degree + map.degree());
    let cols = map.source().dim(source_degree);
    let mut m = vec![vec![Scalar::zero(); cols]; rows];
    for j in 0..cols {
        for (t, c) in map.image(Basis::new(source_degree, j)).iter() {
            m[t.index][j] = c.clone();
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn two_term() -> SpaceRef {
        GradedSpace::from_labels(&[(0, &["x"]), (1, &["y"])]).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let n = two_term();
        let d = GradedMap::from_entries(&n, &n, 1, [(Basis::new(0, 0), Basis::new(1, 0), int(3))])
            .unwrap();
        let id = GradedMap::identity(&n);
        assert_eq!(id.compose(&d).unwrap(), d);
        assert_eq!(d.compose(&id).unwrap(), d);
    }

    #[test]
    fn zero_composition_has_combined_degree() {
        let n = two_term();
        let z = GradedMap::zero(&n, &n, 2);
        let d = GradedMap::from_entries(&n, &n, 1, [(Basis::new(0, 0), Basis::new(1, 0), int(1))])
            .unwrap();
        let c = d.compose(&z).unwrap();
        assert!(c.is_zero());
        assert_eq!(c.degree(), 3);
    }

    #[test]
    fn mismatched_spaces_rejected() {
        let n = two_term();
        let m = GradedSpace::from_labels(&[(0, &["u", "v"])]).unwrap();
        let f = GradedMap::identity(&n);
        let g = GradedMap::identity(&m);
        assert!(matches!(g.compose(&f), Err(Error::SpaceMismatch(_))));
        assert!(f.add(&GradedMap::zero(&n, &n, 1)).is_err());
    }

    #[test]
    fn entries_validate_degree() {
        let n = two_term();
        let bad = GradedMap::from_entries(&n, &n, 0, [(Basis::new(0, 0), Basis::new(1, 0), int(1))]);
        assert!(bad.is_err());
    }

    #[test]
    fn tensor_identity_is_identity() {
        let n = two_term();
        let id = GradedMap::identity(&n);
        let t = tensor_maps(&id, &id);
        assert_eq!(t, GradedMap::identity(t.source()));
    }

    #[test]
    fn koszul_sign_for_odd_map_past_odd_element() {
        // g of degree -1 applied past x of degree 1 picks up (-1)^{(-1)(1)} = -1.
        let a = GradedSpace::from_labels(&[(1, &["x"])]).unwrap();
        let b = GradedSpace::from_labels(&[(0, &["u"]), (1, &["w"])]).unwrap();
        let f = GradedMap::identity(&a);
        let g = GradedMap::from_entries(&b, &b, -1, [(Basis::new(1, 0), Basis::new(0, 0), int(1))])
            .unwrap();
        let t = tensor_maps(&f, &g);
        let x = Basis::new(1, 0);
        let src = t.source().pair_basis(x, Basis::new(1, 0)).unwrap();
        let tgt = t.target().pair_basis(x, Basis::new(0, 0)).unwrap();
        assert_eq!(t.image(src), Vector::term(tgt, int(-1)));
    }
}
