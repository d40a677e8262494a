//! Contractions `(M ⇄ N, h)` and their calculus.
//!
//! A contraction consists of chain maps `ι: M -> N`, `π: N -> M` and a degree −1
//! homotopy `h` on `N` with `πι = Id`, `ιπ − Id = dh + hd` and
//! `πh = hι = h² = 0`. The small module is not required to be a subspace of the
//! big one; `ι` is always explicit.

use crate::complex::{check_chain_map, DGModule, ValidationReport, Witness};
use crate::error::{Error, Result};
use crate::map::{tensor_maps_between, GradedMap};
use crate::scalar::{self, Scalar};
use crate::space::{same_space, Basis, GradedSpace, SpaceRef};
use crate::vector::Vector;
use crate::words;

/// Names of the individual contraction checks, as they appear in reports.
pub mod axiom {
    pub const INCLUSION_CHAIN_MAP: &str = "iota is a chain map";
    pub const PROJECTION_CHAIN_MAP: &str = "pi is a chain map";
    pub const RETRACTION: &str = "pi iota = Id";
    pub const HOMOTOPY: &str = "iota pi - Id = dh + hd";
    pub const PROJ_HOMOTOPY: &str = "pi h = 0";
    pub const HOMOTOPY_INCL: &str = "h iota = 0";
    pub const HOMOTOPY_SQUARE: &str = "h^2 = 0";
}

#[derive(Clone, Debug, PartialEq)]
pub struct Contraction {
    pub big: DGModule,
    pub small: DGModule,
    pub incl: GradedMap,
    pub proj: GradedMap,
    pub homotopy: GradedMap,
}

impl Contraction {
    /// Assembles a contraction after checking degrees and spaces. The axioms are
    /// not checked; see [`validate_contraction`].
    pub fn new(
        big: DGModule,
        small: DGModule,
        incl: GradedMap,
        proj: GradedMap,
        homotopy: GradedMap,
    ) -> Result<Self> {
        let shape = |m: &GradedMap, src: &SpaceRef, tgt: &SpaceRef, deg: i32, name: &str| {
            if m.degree() != deg {
                return Err(Error::DegreeMismatch(format!(
                    "{name} has degree {}, expected {deg}",
                    m.degree()
                )));
            }
            if !same_space(m.source(), src) || !same_space(m.target(), tgt) {
                return Err(Error::SpaceMismatch(format!("{name} connects the wrong spaces")));
            }
            m.with_spaces(src, tgt)
        };
        let incl = shape(&incl, &small.space, &big.space, 0, "inclusion")?;
        let proj = shape(&proj, &big.space, &small.space, 0, "projection")?;
        let homotopy = shape(&homotopy, &big.space, &big.space, -1, "homotopy")?;
        Ok(Contraction {
            big,
            small,
            incl,
            proj,
            homotopy,
        })
    }

    /// `(M ⇄ M, 0)` with identity maps.
    pub fn identity(m: &DGModule) -> Self {
        Contraction {
            big: m.clone(),
            small: m.clone(),
            incl: GradedMap::identity(&m.space),
            proj: GradedMap::identity(&m.space),
            homotopy: GradedMap::zero(&m.space, &m.space, -1),
        }
    }

    /// `ιπ`, the idempotent on the big side.
    pub fn iota_pi(&self) -> GradedMap {
        self.incl.compose(&self.proj).expect("contraction shapes")
    }

    pub fn with_homotopy(&self, homotopy: GradedMap) -> Result<Self> {
        Contraction::new(
            self.big.clone(),
            self.small.clone(),
            self.incl.clone(),
            self.proj.clone(),
            homotopy,
        )
    }
}

fn c(m: Result<GradedMap>) -> GradedMap {
    m.expect("contraction shapes are consistent")
}

/// Checks the chain-map conditions and the five contraction axioms. The report
/// lists each violated condition with a basis vector witnessing it.
pub fn validate_contraction(con: &Contraction) -> ValidationReport {
    let mut report = ValidationReport::default();
    report.extend(check_chain_map(axiom::INCLUSION_CHAIN_MAP, &con.incl, &con.small, &con.big));
    report.extend(check_chain_map(axiom::PROJECTION_CHAIN_MAP, &con.proj, &con.big, &con.small));
    report.extend(retraction_report(con));
    let h = &con.homotopy;
    report.expect_zero(axiom::HOMOTOPY_SQUARE, &c(h.compose(h)));
    report
}

// Every condition except h² = 0.
fn retraction_report(con: &Contraction) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (i, p, h, d) = (&con.incl, &con.proj, &con.homotopy, &con.big.differential);
    report.expect_equal(
        axiom::RETRACTION,
        &c(p.compose(i)),
        &GradedMap::identity(&con.small.space),
    );
    let lhs = c(c(i.compose(p)).sub(&GradedMap::identity(&con.big.space)));
    let rhs = c(c(d.compose(h)).add(&c(h.compose(d))));
    report.expect_equal(axiom::HOMOTOPY, &lhs, &rhs);
    report.expect_zero(axiom::PROJ_HOMOTOPY, &c(p.compose(h)));
    report.expect_zero(axiom::HOMOTOPY_INCL, &c(h.compose(i)));
    report
}

/// Replaces `h` by `−h d h`, which satisfies `h² = 0` whenever the other
/// conditions hold (the sign matches the convention `ιπ − Id = dh + hd`). Inputs violating any other condition are rejected.
pub fn repair_homotopy_square(con: &Contraction) -> Result<Contraction> {
    let mut pre = retraction_report(con);
    pre.extend(check_chain_map(axiom::INCLUSION_CHAIN_MAP, &con.incl, &con.small, &con.big));
    pre.extend(check_chain_map(axiom::PROJECTION_CHAIN_MAP, &con.proj, &con.big, &con.small));
    if let Some(v) = pre.violations.into_iter().next() {
        return Err(Error::PreconditionFailed {
            condition: v.check,
            witness: v.witness,
        });
    }
    let h = &con.homotopy;
    let hdh = c(h.compose(&c(con.big.differential.compose(h))));
    con.with_homotopy(hdh.neg())
}

/// `(M ⇄ N, h) ∘ (N ⇄ P, k) = (M ⇄ P, iι, πp, k + i h p)`: `outer` is the
/// small-side contraction, `inner` the big-side one.
pub fn compose_contractions(outer: &Contraction, inner: &Contraction) -> Result<Contraction> {
    if !outer.big.same_as(&inner.small) {
        return Err(Error::SpaceMismatch(
            "outer contraction's big module is not the inner contraction's small module".into(),
        ));
    }
    let incl = inner.incl.compose(&outer.incl)?;
    let proj = outer.proj.compose(&inner.proj)?;
    let ihp = inner.incl.compose(&outer.homotopy.compose(&inner.proj)?)?;
    let homotopy = inner.homotopy.add(&ihp)?;
    Contraction::new(inner.big.clone(), outer.small.clone(), incl, proj, homotopy)
}

/// `A ⊗ B` with differential `d ⊗ Id + Id ⊗ d`.
pub fn tensor_modules(a: &DGModule, b: &DGModule) -> DGModule {
    let space = GradedSpace::tensor(&a.space, &b.space);
    let ida = GradedMap::identity(&a.space);
    let idb = GradedMap::identity(&b.space);
    let d1 = tensor_maps_between(&a.differential, &idb, &space, &space);
    let d2 = tensor_maps_between(&ida, &b.differential, &space, &space);
    DGModule::new(&space, c(d1.add(&d2))).expect("tensor differential has degree 1")
}

/// Tensor product of contractions, with homotopy `h * k = ιπ ⊗ k + h ⊗ Id`.
pub fn tensor_contractions(a: &Contraction, b: &Contraction) -> Contraction {
    let big = tensor_modules(&a.big, &b.big);
    let small = tensor_modules(&a.small, &b.small);
    let incl = tensor_maps_between(&a.incl, &b.incl, &small.space, &big.space);
    let proj = tensor_maps_between(&a.proj, &b.proj, &big.space, &small.space);
    let id_b = GradedMap::identity(&b.big.space);
    let h1 = tensor_maps_between(&a.iota_pi(), &b.homotopy, &big.space, &big.space);
    let h2 = tensor_maps_between(&a.homotopy, &id_b, &big.space, &big.space);
    Contraction::new(big, small, incl, proj, c(h1.add(&h2))).expect("tensor shapes")
}

/// `(⊗ⁿV, Σ Id ⊗ … ⊗ d ⊗ … ⊗ Id)`.
pub fn tensor_power_module(m: &DGModule, n: usize) -> DGModule {
    let space = GradedSpace::words(&m.space, n, n);
    let d = words::derivation(&m.differential, &space);
    DGModule::new(&space, d).expect("degree 1")
}

/// `Tⁿh = Σ_{i=1}^{n} (ιπ)^{⊗ i−1} ⊗ h ⊗ Id^{⊗ n−i}` on `⊗ⁿN`.
pub fn tensor_power_homotopy(con: &Contraction, n: usize) -> Result<GradedMap> {
    if n == 0 {
        return Err(Error::PreconditionFailed {
            condition: "n >= 1".into(),
            witness: Witness::new("n", "0"),
        });
    }
    let space = GradedSpace::words(&con.big.space, n, n);
    Ok(words::tensor_homotopy(&con.iota_pi(), &con.homotopy, &space))
}

/// The n-th tensor power `(⊗ⁿM ⇄ ⊗ⁿN, Tⁿh)`.
pub fn tensor_power_contraction(con: &Contraction, n: usize) -> Result<Contraction> {
    let homotopy = tensor_power_homotopy(con, n)?;
    let big = tensor_power_module(&con.big, n);
    let small = tensor_power_module(&con.small, n);
    let incl = words::letterwise(&con.incl, &small.space, &big.space);
    let proj = words::letterwise(&con.proj, &big.space, &small.space);
    Contraction::new(big, small, incl, proj, homotopy)
}

/// The canonical isomorphism `(A ⊗ B) ⊗ C -> A ⊗ (B ⊗ C)` (or any pair of nested
/// tensor or word spaces with the same flattened letters). No signs arise.
pub fn reassociation(source: &SpaceRef, target: &SpaceRef) -> Result<GradedMap> {
    let mut lookup = std::collections::HashMap::new();
    for b in target.basis() {
        lookup.insert(target.flatten(b), b);
    }
    GradedMap::try_from_fn(source, target, 0, |b| {
        let letters = source.flatten(b);
        lookup
            .get(&letters)
            .map(|t| Vector::basis(*t))
            .ok_or_else(|| Error::SpaceMismatch("reassociation: letters do not match".into()))
    })
}

/// Splits a complex over ℚ onto its homology by repeated elementary
/// reductions. The pivot is always the first nonzero entry of the current
/// differential in (degree, basis index) order. The small module has zero
/// differential.
pub fn homology_contraction(m: &DGModule) -> Contraction {
    let mut current = Contraction::identity(m);
    while let Some((x, y, pivot)) = find_pivot(&current.small.differential) {
        let step = elementary_reduction(&current.small, x, y, &pivot);
        current = compose_contractions(&step, &current).expect("reduction chains");
    }
    current
}

fn find_pivot(d: &GradedMap) -> Option<(Basis, Basis, Scalar)> {
    d.source().basis().into_iter().find_map(|b| {
        d.image(b).leading().map(|(t, c)| (b, t, c.clone()))
    })
}

/// Cancels the pair `d(x) = c·y + …`, giving `(M' ⇄ M, h)` where `M'` drops
/// `x` and `y`.
fn elementary_reduction(m: &DGModule, x: Basis, y: Basis, c: &Scalar) -> Contraction {
    let space = &m.space;
    let d = &m.differential;
    let keep = |b: &Basis| *b != x && *b != y;
    let mut components: Vec<(i32, Vec<String>)> = Vec::new();
    let mut old_to_new = std::collections::HashMap::new();
    let mut new_to_old = std::collections::HashMap::new();
    for deg in space.degrees().collect::<Vec<_>>() {
        let mut labels = Vec::new();
        for (i, l) in space.labels(deg).iter().enumerate() {
            let b = Basis::new(deg, i);
            if keep(&b) {
                let nb = Basis::new(deg, labels.len());
                old_to_new.insert(b, nb);
                new_to_old.insert(nb, b);
                labels.push(l.clone());
            }
        }
        if !labels.is_empty() {
            components.push((deg, labels));
        }
    }
    let reduced: SpaceRef = GradedSpace::new(components).expect("subset of a valid space");
    let dx = d.image(x);
    let inv = scalar::one() / c;
    let drop_pair = |v: &Vector| -> Vector {
        v.iter()
            .filter_map(|(b, k)| old_to_new.get(b).map(|nb| (*nb, k.clone())))
            .collect()
    };
    let d_new = GradedMap::from_fn(&reduced, &reduced, 1, |nb| {
        let ob = new_to_old[&nb];
        let mut v = d.image(ob);
        let coeff = v.get(y) * &inv;
        v.add_scaled(&dx, &-coeff);
        drop_pair(&v)
    });
    let incl = GradedMap::from_fn(&reduced, space, 0, |nb| {
        let ob = new_to_old[&nb];
        let mut v = Vector::basis(ob);
        let coeff = d.image(ob).get(y) * &inv;
        v.add_term(x, -coeff);
        v
    });
    let proj = GradedMap::from_fn(space, &reduced, 0, |b| {
        if b == x {
            Vector::new()
        } else if b == y {
            drop_pair(&dx).scaled(&-inv.clone())
        } else {
            Vector::basis(old_to_new[&b])
        }
    });
    let homotopy = GradedMap::from_fn(space, space, -1, |b| {
        if b == y {
            Vector::term(x, -inv.clone())
        } else {
            Vector::new()
        }
    });
    let small = DGModule::new(&reduced, d_new).expect("degree 1");
    Contraction::new(m.clone(), small, incl, proj, homotopy).expect("reduction shapes")
}

/// A chain map `f: N -> B` between the big sides of two contractions with
/// `f h = k f`.
#[derive(Clone, Debug)]
pub struct ContractionMorphism {
    pub from: Contraction,
    pub to: Contraction,
    pub map: GradedMap,
}

impl ContractionMorphism {
    pub fn new(from: Contraction, to: Contraction, map: GradedMap) -> Result<Self> {
        if map.degree() != 0 {
            return Err(Error::DegreeMismatch("morphism must have degree 0".into()));
        }
        let chain = check_chain_map("f is a chain map", &map, &from.big, &to.big);
        if let Some(v) = chain.violations.into_iter().next() {
            return Err(Error::MorphismInvalid(v.witness));
        }
        let fh = map.compose(&from.homotopy)?;
        let kf = to.homotopy.compose(&map)?;
        if let Some((b, x, y)) = fh.difference_witness(&kf) {
            return Err(Error::MorphismInvalid(Witness::basis(
                &from.big.space,
                b,
                &to.big.space,
                &(&x - &y),
            )));
        }
        Ok(ContractionMorphism { from, to, map })
    }

    /// `f̂ = p f ι`. Both squares `i f̂ = f ι` and `f̂ π = p f` are asserted.
    pub fn induced_small_map(&self) -> Result<GradedMap> {
        let f = &self.map;
        let fhat = self.to.proj.compose(&f.compose(&self.from.incl)?)?;
        let lhs = self.to.incl.compose(&fhat)?;
        let rhs = f.compose(&self.from.incl)?;
        if lhs != rhs {
            return Err(Error::InternalAssertion("i f^ != f iota".into()));
        }
        let lhs = fhat.compose(&self.from.proj)?;
        let rhs = self.to.proj.compose(f)?;
        if lhs != rhs {
            return Err(Error::InternalAssertion("f^ pi != p f".into()));
        }
        Ok(fhat)
    }
}

/// `f̂ = p f ι` for a morphism of contractions.
pub fn induced_small_map(phi: &ContractionMorphism) -> Result<GradedMap> {
    phi.induced_small_map()
}

/// `A ⊕ B` as a plain space, with the two injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub space: SpaceRef,
    pub inject_left: GradedMap,
    pub inject_right: GradedMap,
    pub project_left: GradedMap,
    pub project_right: GradedMap,
}

pub fn direct_sum(a: &SpaceRef, b: &SpaceRef) -> DirectSum {
    let mut degrees: Vec<i32> = a.degrees().chain(b.degrees()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let clash = degrees.iter().any(|&d| {
        b.labels(d).iter().any(|l| a.labels(d).contains(l))
    });
    let components: Vec<(i32, Vec<String>)> = degrees
        .iter()
        .map(|&d| {
            let mut ls: Vec<String> = a.labels(d).to_vec();
            ls.extend(b.labels(d).iter().map(|l| if clash { format!("{l}'") } else { l.clone() }));
            (d, ls)
        })
        .collect();
    let space = GradedSpace::new(components).expect("direct sum of valid spaces");
    let right_of = |bb: Basis| Basis::new(bb.degree, a.dim(bb.degree) + bb.index);
    let inject_left = GradedMap::from_fn(a, &space, 0, Vector::basis);
    let inject_right = GradedMap::from_fn(b, &space, 0, |bb| Vector::basis(right_of(bb)));
    let project_left = GradedMap::from_fn(&space, a, 0, |s| {
        if s.index < a.dim(s.degree) {
            Vector::basis(s)
        } else {
            Vector::new()
        }
    });
    let project_right = GradedMap::from_fn(&space, b, 0, |s| {
        let na = a.dim(s.degree);
        if s.index >= na {
            Vector::basis(Basis::new(s.degree, s.index - na))
        } else {
            Vector::new()
        }
    });
    DirectSum {
        space,
        inject_left,
        inject_right,
        project_left,
        project_right,
    }
}

/// `f ⊕ g` on direct sums built by [`direct_sum`].
pub fn direct_sum_map(f: &GradedMap, g: &GradedMap, source: &DirectSum, target: &DirectSum) -> Result<GradedMap> {
    let left = target.inject_left.compose(&f.compose(&source.project_left)?)?;
    let right = target.inject_right.compose(&g.compose(&source.project_right)?)?;
    left.add(&right)
}

pub fn direct_sum_modules(a: &DGModule, b: &DGModule) -> (DGModule, DirectSum) {
    let sum = direct_sum(&a.space, &b.space);
    let d = c(direct_sum_map(&a.differential, &b.differential, &sum, &sum));
    (DGModule::new(&sum.space, d).expect("degree 1"), sum)
}

/// Direct sum of two contractions; returns the sums used for the big and small sides.
pub fn direct_sum_contractions(a: &Contraction, b: &Contraction) -> (Contraction, DirectSum, DirectSum) {
    let (big, big_sum) = direct_sum_modules(&a.big, &b.big);
    let (small, small_sum) = direct_sum_modules(&a.small, &b.small);
    let incl = c(direct_sum_map(&a.incl, &b.incl, &small_sum, &big_sum));
    let proj = c(direct_sum_map(&a.proj, &b.proj, &big_sum, &small_sum));
    let h = c(direct_sum_map(&a.homotopy, &b.homotopy, &big_sum, &big_sum));
    let con = Contraction::new(big, small, incl, proj, h).expect("direct sum shapes");
    (con, big_sum, small_sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    pub(crate) fn two_term(h_sign: i64) -> Contraction {
        let n = GradedSpace::from_labels(&[(0, &["x"]), (1, &["y"])]).unwrap();
        let x = Basis::new(0, 0);
        let y = Basis::new(1, 0);
        let d = GradedMap::from_entries(&n, &n, 1, [(x, y, int(1))]).unwrap();
        let big = DGModule::new(&n, d).unwrap();
        let zero = GradedSpace::empty();
        let small = DGModule::trivial(&zero);
        let h = GradedMap::from_entries(&n, &n, -1, [(y, x, int(h_sign))]).unwrap();
        Contraction::new(
            big,
            small,
            GradedMap::zero(&zero, &n, 0),
            GradedMap::zero(&n, &zero, 0),
            h,
        )
        .unwrap()
    }

    #[test]
    fn identity_contraction_validates() {
        let n = GradedSpace::from_labels(&[(0, &["x"]), (1, &["y"])]).unwrap();
        let c = Contraction::identity(&DGModule::trivial(&n));
        assert!(validate_contraction(&c).is_ok());
    }

    #[test]
    fn two_term_contraction() {
        assert!(validate_contraction(&two_term(-1)).is_ok());
        let report = validate_contraction(&two_term(1));
        assert!(report.mentions(axiom::HOMOTOPY), "{report}");
    }

    #[test]
    fn repair_fixed_point_and_zero() {
        let c = two_term(-1);
        let r = repair_homotopy_square(&c).unwrap();
        assert_eq!(r.homotopy, c.homotopy);
        let n = GradedSpace::from_labels(&[(0, &["x"])]).unwrap();
        let id = Contraction::identity(&DGModule::trivial(&n));
        assert!(repair_homotopy_square(&id).unwrap().homotopy.is_zero());
    }

    #[test]
    fn repair_rejects_broken_retraction() {
        let err = repair_homotopy_square(&two_term(1)).unwrap_err();
        match err {
            Error::PreconditionFailed { condition, .. } => assert_eq!(condition, axiom::HOMOTOPY),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn compose_with_identity() {
        let c = two_term(-1);
        let left = compose_contractions(&Contraction::identity(&c.small), &c).unwrap();
        assert_eq!(left, c);
        let right = compose_contractions(&c, &Contraction::identity(&c.big)).unwrap();
        assert_eq!(right, c);
        assert!(compose_contractions(&c, &c).is_err());
    }

    #[test]
    fn tensor_with_identity_has_h_tensor_id() {
        let c = two_term(-1);
        let m = GradedSpace::from_labels(&[(0, &["u"])]).unwrap();
        let id = Contraction::identity(&DGModule::trivial(&m));
        let t = tensor_contractions(&c, &id);
        assert!(validate_contraction(&t).is_ok());
        let expected = tensor_maps_between(
            &c.homotopy,
            &GradedMap::identity(&m),
            &t.big.space,
            &t.big.space,
        );
        assert_eq!(t.homotopy, expected);
    }

    #[test]
    fn tensor_power_small_cases() {
        let c = two_term(-1);
        let t1 = tensor_power_homotopy(&c, 1).unwrap();
        assert_eq!(t1.nnz(), 1);
        let words1 = t1.source().clone();
        let y = words1.word_basis(&[Basis::new(1, 0)]).unwrap();
        let x = words1.word_basis(&[Basis::new(0, 0)]).unwrap();
        assert_eq!(t1.image(y), Vector::term(x, int(-1)));
        assert!(tensor_power_homotopy(&c, 0).is_err());
        for n in 1..=3 {
            let p = tensor_power_contraction(&c, n).unwrap();
            assert!(validate_contraction(&p).is_ok(), "n = {n}");
        }
    }

    #[test]
    fn homology_of_two_term_is_zero() {
        let c = two_term(-1);
        let h = homology_contraction(&c.big);
        assert!(h.small.space.is_empty());
        assert!(validate_contraction(&h).is_ok());
    }

    #[test]
    fn homology_of_zero_differential_is_identity() {
        let n = GradedSpace::from_labels(&[(0, &["x", "z"]), (1, &["y"])]).unwrap();
        let m = DGModule::trivial(&n);
        assert_eq!(homology_contraction(&m), Contraction::identity(&m));
    }

    #[test]
    fn morphism_identity_and_zero() {
        let c = two_term(-1);
        let id = GradedMap::identity(&c.big.space);
        let phi = ContractionMorphism::new(c.clone(), c.clone(), id).unwrap();
        assert_eq!(phi.induced_small_map().unwrap(), GradedMap::identity(&c.small.space));
        let z = GradedMap::zero(&c.big.space, &c.big.space, 0);
        let phi = ContractionMorphism::new(c.clone(), c.clone(), z).unwrap();
        assert!(phi.induced_small_map().unwrap().is_zero());
    }

    #[test]
    fn morphism_rejects_noncommuting_homotopy() {
        // f = projection onto x kills y but h(y) = -x, so fh != hf.
        let c = two_term(-1);
        let n = &c.big.space;
        let f = GradedMap::from_entries(n, n, 0, [(Basis::new(1, 0), Basis::new(1, 0), int(2))])
            .unwrap();
        assert!(matches!(
            ContractionMorphism::new(c.clone(), c.clone(), f),
            Err(Error::MorphismInvalid(_))
        ));
    }

    #[test]
    fn direct_sum_of_contractions_validates() {
        let (s, _, _) = direct_sum_contractions(&two_term(-1), &two_term(-1));
        assert!(validate_contraction(&s).is_ok());
        assert_eq!(s.big.space.labels(0), &["x".to_string(), "x'".to_string()]);
    }
}
