//! Symmetric tensors `⊙ⁿV = (⊗ⁿV)^{Σ_n}` inside word spaces, the codifferential
//! criterion `pQ² = 0`, and the encodings of bilinear products as quadratic
//! coderivations on `V = L[1]`.

use std::collections::BTreeMap;

use crate::coalgebra::{extend_coderivation, CoderivationSpec, TruncatedCoalgebra};
use crate::complex::{Verdict, Witness};
use crate::contraction::Contraction;
use crate::error::{Error, Result};
use crate::map::GradedMap;
use crate::perm::{sorting_sign, twist_permutation, Permutation};
use crate::scalar::{self, Scalar};
use crate::space::{Basis, GradedSpace, SpaceRef, Word};
use crate::vector::Vector;
use crate::words::{self, comb_add, comb_to_vector, WordComb};

fn word_of(space: &SpaceRef, b: Basis) -> &Word {
    space.word(b).expect("word space")
}

/// `σ_tw` as an endomorphism of a word space (applied to words of length `σ.len()`,
/// zero on other lengths).
pub fn twist_map(sigma: &Permutation, space: &SpaceRef) -> GradedMap {
    GradedMap::from_fn(space, space, 0, |b| {
        let w = word_of(space, b);
        if w.len() != sigma.len() {
            return Vector::new();
        }
        let (out, neg) = twist_permutation(sigma, w).expect("lengths agree");
        Vector::term(space.word_basis(&out).expect("permuted word"), scalar::sign(neg))
    })
}

/// `e(w) = (1/n!) Σ_σ σ_tw(w)` for a single word, as a word combination.
fn symmetrize_word(word: &[Basis], perms: &[Permutation], comb: &mut WordComb) {
    let weight = scalar::one() / scalar::factorial(word.len());
    for sigma in perms {
        let (out, neg) = twist_permutation(sigma, word).expect("lengths agree");
        comb_add(comb, out, &weight * scalar::sign(neg));
    }
}

fn permutations_by_length(space: &SpaceRef) -> BTreeMap<usize, Vec<Permutation>> {
    let (lo, hi) = space.word_lengths().expect("word space");
    (lo..=hi).map(|n| (n, Permutation::all(n))).collect()
}

/// The averaging projector `e_n` on every weight of a word space.
pub fn symmetrizer_on(space: &SpaceRef) -> GradedMap {
    let perms = permutations_by_length(space);
    GradedMap::from_fn(space, space, 0, |b| {
        let w = word_of(space, b);
        let mut comb = WordComb::new();
        symmetrize_word(w, &perms[&w.len()], &mut comb);
        comb_to_vector(space, &comb)
    })
}

/// `e_n = (1/n!) Σ_σ σ_tw` on `⊗ⁿV`.
pub fn symmetrizer(generators: &SpaceRef, n: usize) -> GradedMap {
    symmetrizer_on(&GradedSpace::words(generators, n, n))
}

/// Membership in the symmetric tensors: invariance under every adjacent
/// transposition, which generate `Σ_n`.
pub fn is_invariant(space: &SpaceRef, v: &Vector) -> bool {
    v.iter().all(|(b, c)| {
        let w = word_of(space, *b);
        (0..w.len().saturating_sub(1)).all(|i| {
            let tau = Permutation::transposition(w.len(), i, i + 1);
            let (out, neg) = twist_permutation(&tau, w).expect("lengths agree");
            let image = space.word_basis(&out).expect("permuted word");
            v.get(image) == c * scalar::sign(neg)
        })
    })
}

/// Orbit sums `Σ_{u ∈ Σ_n·w} ±u` over sorted words `w` of the given weight,
/// normalized so that `w` has coefficient 1. Multisets with a repeated odd letter
/// have zero orbit sum and are omitted.
pub fn invariant_basis(space: &SpaceRef, n: usize) -> Vec<Vector> {
    orbit_sums(space, n).into_iter().map(|(v, _)| v).collect()
}

fn orbit_sums(space: &SpaceRef, n: usize) -> Vec<(Vector, Basis)> {
    let perms = Permutation::all(n);
    let mut out = Vec::new();
    for b in space.basis() {
        let w = word_of(space, b);
        if w.len() != n || sorting_sign(w).0 != *w {
            continue;
        }
        if w.windows(2).any(|p| p[0] == p[1] && p[0].is_odd()) {
            continue;
        }
        let mut comb = WordComb::new();
        symmetrize_word(w, &perms, &mut comb);
        let v = comb_to_vector(space, &comb);
        let lead = v.get(b);
        out.push((v.scaled(&(scalar::one() / lead)), b));
    }
    out
}

/// All orbit sums of a word space, weight by weight.
pub fn invariant_vectors(space: &SpaceRef) -> Vec<Vector> {
    let (lo, hi) = space.word_lengths().expect("word space");
    (lo..=hi).flat_map(|n| invariant_basis(space, n)).collect()
}

/// The symmetric tensors of a word space as a space in their own right, with the
/// orbit sums as basis.
pub fn invariant_space(space: &SpaceRef) -> SpaceRef {
    let (lo, hi) = space.word_lengths().expect("word space");
    let entries = (lo..=hi)
        .flat_map(|n| orbit_sums(space, n))
        .map(|(v, b)| (v, b, scalar::one()))
        .collect();
    GradedSpace::invariants(space, entries)
}

/// Expresses a map between word spaces that preserves symmetric tensors as a map
/// between their invariant spaces.
pub fn restrict_to_invariants(f: &GradedMap, source: &SpaceRef, target: &SpaceRef) -> Result<GradedMap> {
    GradedMap::try_from_fn(source, target, f.degree(), |b| {
        let v = source.invariant_vector(b).expect("invariant space");
        let image = f.apply(v);
        target.invariant_coordinates(&image).ok_or_else(|| {
            Error::PreconditionFailed {
                condition: "map preserves symmetric tensors".into(),
                witness: Witness::vector(
                    f.source(),
                    v,
                    f.target(),
                    &image,
                ),
            }
        })
    })
}

/// Whether `Q` maps each orbit sum of `source` to a symmetric tensor of `target`.
pub fn preserves_symmetric(q: &GradedMap) -> Verdict {
    let (source, target) = (q.source(), q.target());
    for v in invariant_vectors(source) {
        let image = q.apply(&v);
        if !is_invariant(target, &image) {
            return Err(Witness::vector(source, &v, target, &image));
        }
    }
    Ok(())
}

/// Where the codifferential criterion is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Tensor,
    Symmetric,
}

/// `pQ² = 0` on all words (tensor side) or on all orbit sums (symmetric side)
/// of the truncation.
pub fn is_codifferential(q: &CoderivationSpec, side: Side) -> Result<Verdict> {
    if q.degree() != 1 {
        return Err(Error::DegreeMismatch(format!(
            "a codifferential has degree +1, got {}",
            q.degree()
        )));
    }
    let amb = q.ambient();
    let big_q = extend_coderivation(q);
    let p = q.corestriction();
    let inputs: Vec<Vector> = match side {
        Side::Tensor => amb.space().basis().into_iter().map(Vector::basis).collect(),
        Side::Symmetric => invariant_vectors(amb.space()),
    };
    for v in inputs {
        let value = p.apply(&big_q.apply(&v));
        if !value.is_zero() {
            return Ok(Err(Witness::vector(amb.space(), &v, amb.generators(), &value)));
        }
    }
    Ok(Ok(()))
}

/// `S^n k = (1/n!) Σ_σ σ_tw ∘ Tⁿk ∘ σ_tw⁻¹` on `⊗ⁿN`, summed over all weights of
/// the given word space over `c.big`.
pub fn symmetrized_homotopy(c: &Contraction, space: &SpaceRef) -> GradedMap {
    let tk = words::tensor_homotopy(&c.iota_pi(), &c.homotopy, space);
    let perms = permutations_by_length(space);
    GradedMap::from_fn(space, space, c.homotopy.degree(), |b| {
        let w = word_of(space, b);
        let n = w.len();
        let weight = scalar::one() / scalar::factorial(n);
        let mut out = Vector::new();
        for sigma in &perms[&n] {
            let (pre, neg) = twist_permutation(&sigma.inverse(), w).expect("lengths agree");
            let mid = tk.image(space.word_basis(&pre).expect("word"));
            for (u, c) in mid.iter() {
                let (post, neg2) = twist_permutation(sigma, word_of(space, *u)).expect("lengths");
                let coeff = c * scalar::sign(neg ^ neg2) * &weight;
                out.add_term(space.word_basis(&post).expect("word"), coeff);
            }
        }
        out
    })
}

/// A bilinear product `L × L -> L` on a space concentrated in degree 0.
#[derive(Clone, Debug)]
pub struct BilinearTable {
    space: SpaceRef,
    products: BTreeMap<(usize, usize), Vector>,
}

impl BilinearTable {
    pub fn new(space: &SpaceRef) -> Result<Self> {
        if space.degrees().any(|d| d != 0) {
            return Err(Error::DegreeError("the algebra must be concentrated in degree 0".into()));
        }
        Ok(BilinearTable {
            space: space.clone(),
            products: BTreeMap::new(),
        })
    }

    /// Structure constants `e_i e_j = Σ_k c_k e_k` given as labels.
    pub fn from_labels(labels: &[&str], entries: &[(&str, &str, &[(&str, Scalar)])]) -> Result<Self> {
        let space = GradedSpace::from_labels(&[(0, labels)])?;
        let mut table = BilinearTable::new(&space)?;
        let find = |l: &str| {
            space
                .find(l)
                .map(|b| b.index)
                .ok_or_else(|| Error::Semantic(format!("unknown label {l}")))
        };
        for (x, y, terms) in entries {
            let mut v = Vector::new();
            for (z, c) in terms.iter() {
                v.add_term(Basis::new(0, find(z)?), c.clone());
            }
            table.set(find(x)?, find(y)?, v);
        }
        Ok(table)
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim(0)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Vector) {
        if v.is_zero() {
            self.products.remove(&(i, j));
        } else {
            self.products.insert((i, j), v);
        }
    }

    pub fn product(&self, i: usize, j: usize) -> Vector {
        self.products.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Bilinear extension to arbitrary vectors.
    pub fn apply(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::new();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_scaled(&self.product(a.index, b.index), &(ca * cb));
            }
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Vector)> {
        self.products.iter()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.product(i, j) == -&self.product(j, i)))
    }

    /// First triple whose Jacobiator `[[x,y],z] + [[y,z],x] + [[z,x],y]` is nonzero.
    pub fn jacobi_witness(&self) -> Option<(usize, usize, usize, Vector)> {
        let n = self.dim();
        let e = |i: usize| Vector::basis(Basis::new(0, i));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = self.apply(&self.product(i, j), &e(k));
                    v = &v + &self.apply(&self.product(j, k), &e(i));
                    v = &v + &self.apply(&self.product(k, i), &e(j));
                    if !v.is_zero() {
                        return Some((i, j, k, v));
                    }
                }
            }
        }
        None
    }

    /// First triple with `(xy)z ≠ x(yz)`.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize, Vector)> {
        let n = self.dim();
        let e = |i: usize| Vector::basis(Basis::new(0, i));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.apply(&self.product(i, j), &e(k));
                    let rhs = self.apply(&e(i), &self.product(j, k));
                    let v = &lhs - &rhs;
                    if !v.is_zero() {
                        return Some((i, j, k, v));
                    }
                }
            }
        }
        None
    }

    /// The commutator table `[x,y] = xy − yx`.
    pub fn commutator(&self) -> BilinearTable {
        let mut out = BilinearTable {
            space: self.space.clone(),
            products: BTreeMap::new(),
        };
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, &self.product(i, j) - &self.product(j, i));
            }
        }
        out
    }
}

/// How a bilinear product is turned into a quadratic coderivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Encoding {
    /// `q₂(x⊗y) = xy`.
    Associative,
    /// `q₂(x⊗y) = ½[x,y]`, so that `q₂(x⊗y − y⊗x) = [x,y]`.
    Lie,
}

/// The degree +1 coderivation on `T̄(L[1])` with `q₂` as selected and all other
/// components zero.
pub fn encode_bilinear(table: &BilinearTable, encoding: Encoding, max_weight: usize) -> Result<CoderivationSpec> {
    let v = table.space().shift(1);
    let amb = TruncatedCoalgebra::new(&v, max_weight.max(2))?;
    let factor = match encoding {
        Encoding::Associative => scalar::one(),
        Encoding::Lie => scalar::frac(1, 2),
    };
    let shifted = |b: &Basis| Basis::new(-1, b.index);
    let mut terms = Vec::new();
    for (&(i, j), prod) in table.entries() {
        let word = vec![Basis::new(-1, i), Basis::new(-1, j)];
        for (z, c) in prod.iter() {
            terms.push((word.clone(), shifted(z), c * &factor));
        }
    }
    CoderivationSpec::from_terms(&amb, 1, terms)
}

/// The bracket table of sl₂ with basis `A, B, H`:
/// `[A,B] = H`, `[H,A] = 2A`, `[H,B] = −2B`.
pub fn sl2() -> BilinearTable {
    let i = scalar::int;
    BilinearTable::from_labels(
        &["A", "B", "H"],
        &[
            ("A", "B", &[("H", i(1))]),
            ("B", "A", &[("H", i(-1))]),
            ("H", "A", &[("A", i(2))]),
            ("A", "H", &[("A", i(-2))]),
            ("H", "B", &[("B", i(-2))]),
            ("B", "H", &[("B", i(2))]),
        ],
    )
    .expect("sl2 table")
}

/// The associative product of 2×2 matrices on the basis `E11, E12, E21, E22`.
pub fn matrix_algebra() -> BilinearTable {
    let labels = ["E11", "E12", "E21", "E22"];
    let space = GradedSpace::from_labels(&[(0, &labels)]).expect("labels");
    let mut t = BilinearTable::new(&space).expect("degree 0");
    let idx = |r: usize, c: usize| 2 * r + c;
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    if b == c {
                        t.set(idx(a, b), idx(c, d), Vector::basis(Basis::new(0, idx(a, d))));
                    }
                }
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn even2() -> SpaceRef {
        GradedSpace::from_labels(&[(0, &["x", "y"])]).unwrap()
    }

    #[test]
    fn symmetrizer_small_cases() {
        let v = even2();
        let e1 = symmetrizer(&v, 1);
        assert_eq!(e1, GradedMap::identity(e1.source()));
        let e2 = symmetrizer(&v, 2);
        let s = e2.source().clone();
        let (x, y) = (Basis::new(0, 0), Basis::new(0, 1));
        let xy = s.word_basis(&[x, y]).unwrap();
        let yx = s.word_basis(&[y, x]).unwrap();
        assert_eq!(e2.image(xy), Vector::from_terms([(xy, frac(1, 2)), (yx, frac(1, 2))]));
        assert_eq!(e2.compose(&e2).unwrap(), e2);
    }

    #[test]
    fn orbit_sums_with_odd_letters() {
        let v = GradedSpace::from_labels(&[(1, &["v"])]).unwrap();
        let s = GradedSpace::words(&v, 2, 2);
        assert!(invariant_basis(&s, 2).is_empty());
        let x = GradedSpace::from_labels(&[(0, &["x"])]).unwrap();
        let s = GradedSpace::words(&x, 2, 2);
        assert_eq!(invariant_basis(&s, 2).len(), 1);
    }

    #[test]
    fn invariance_test_matches_symmetrizer() {
        let v = GradedSpace::from_labels(&[(0, &["x"]), (1, &["u", "w"])]).unwrap();
        let s = GradedSpace::words(&v, 1, 3);
        let e = symmetrizer_on(&s);
        for b in s.basis() {
            let sym = e.image(b);
            assert!(is_invariant(&s, &sym));
            assert_eq!(is_invariant(&s, &Vector::basis(b)), e.image(b) == Vector::basis(b));
        }
        for v in invariant_vectors(&s) {
            assert_eq!(e.apply(&v), v);
        }
    }

    #[test]
    fn invariant_space_coordinates() {
        let s = GradedSpace::words(&even2(), 1, 2);
        let inv = invariant_space(&s);
        assert_eq!(inv.total_dim(), 2 + 3);
        let e = symmetrizer_on(&s);
        let r = restrict_to_invariants(&e, &inv, &inv).unwrap();
        assert_eq!(r, GradedMap::identity(&inv));
    }

    #[test]
    fn sl2_criterion_sides() {
        let table = sl2();
        assert!(table.is_antisymmetric());
        assert!(table.jacobi_witness().is_none());
        let q = encode_bilinear(&table, Encoding::Lie, 3).unwrap();
        assert!(is_codifferential(&q, Side::Symmetric).unwrap().is_ok());
        let w = is_codifferential(&q, Side::Tensor).unwrap().unwrap_err();
        assert_eq!(w.input.matches('⊗').count(), 2, "{w}");
    }

    #[test]
    fn matrix_product_is_associative_codifferential() {
        let m = matrix_algebra();
        assert!(m.associativity_witness().is_none());
        let q = encode_bilinear(&m, Encoding::Associative, 3).unwrap();
        assert!(is_codifferential(&q, Side::Tensor).unwrap().is_ok());
        assert!(m.commutator().jacobi_witness().is_none());
    }

    #[test]
    fn encode_rejects_graded_algebra() {
        let s = GradedSpace::from_labels(&[(1, &["x"])]).unwrap();
        assert!(matches!(BilinearTable::new(&s), Err(Error::DegreeError(_))));
    }

    #[test]
    fn zero_coderivation_is_codifferential() {
        let t = TruncatedCoalgebra::new(&even2().shift(1), 3).unwrap();
        let q = CoderivationSpec::zero(&t, 1);
        assert!(is_codifferential(&q, Side::Tensor).unwrap().is_ok());
        assert!(is_codifferential(&q, Side::Symmetric).unwrap().is_ok());
        assert!(is_codifferential(&CoderivationSpec::zero(&t, 0), Side::Tensor).is_err());
    }

    #[test]
    fn twist_map_is_signed_permutation() {
        let v = GradedSpace::from_labels(&[(1, &["u", "w"])]).unwrap();
        let s = GradedSpace::words(&v, 2, 2);
        let t = twist_map(&Permutation::transposition(2, 0, 1), &s);
        for b in s.basis() {
            let img = t.image(b);
            assert_eq!(img.len(), 1);
            assert_eq!(img.iter().next().unwrap().1.clone() * int(-1), int(1));
        }
    }
}
