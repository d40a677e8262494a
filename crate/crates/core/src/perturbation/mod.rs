//! Perturbed inclusion, projection and differential of a contraction, and the
//! transfers built on them.
//!
//! For a contraction `(M ⇄ N, h)` and a degree +1 map `∂` on `N`:
//!
//! ```text
//! ι_∂ = Σ (h∂)ⁿ ι      π_∂ = Σ π(∂h)ⁿ      D_∂ = π∂ι_∂ = π_∂∂ι
//! ```
//!
//! Series are summed per basis vector until the iterate vanishes. Hitting the
//! iteration cap is an error, never a silent truncation.

mod linfty;
mod relative;

pub use linfty::{linfty_transfer, recursive_inclusion, LinftyResult, StructureConstant};
pub use relative::relative_transfer;

use serde::Serialize;

use crate::complex::{ValidationReport, Violation, Witness};
use crate::contraction::{compose_contractions, Contraction};
use crate::complex::DGModule;
use crate::error::{Error, Result};
use crate::exec;
use crate::map::GradedMap;
use crate::space::{same_space, Basis, SpaceRef};
use crate::subspace::Subspace;
use crate::vector::Vector;

/// A degree +1 map on the big module of a contraction, optionally designated as
/// a perturbation only over a subspace `A`.
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub ambient: DGModule,
    pub delta: GradedMap,
    pub over: Option<Subspace>,
}

impl Perturbation {
    pub fn global(ambient: &DGModule, delta: GradedMap) -> Result<Self> {
        check_delta_shape(&ambient.space, &delta)?;
        Ok(Perturbation {
            ambient: ambient.clone(),
            delta: delta.with_spaces(&ambient.space, &ambient.space)?,
            over: None,
        })
    }

    pub fn over(ambient: &DGModule, delta: GradedMap, subspace: Subspace) -> Result<Self> {
        let mut p = Perturbation::global(ambient, delta)?;
        if !same_space(subspace.space(), &ambient.space) {
            return Err(Error::SpaceMismatch("subspace does not live in the perturbed module".into()));
        }
        p.over = Some(subspace);
        Ok(p)
    }

    /// `(d + ∂)`.
    pub fn perturbed_differential(&self) -> GradedMap {
        self.ambient.differential.add(&self.delta).expect("same shape")
    }
}

fn check_delta_shape(space: &SpaceRef, delta: &GradedMap) -> Result<()> {
    if delta.degree() != 1 {
        return Err(Error::DegreeMismatch(format!(
            "perturbation has degree {}, expected +1",
            delta.degree()
        )));
    }
    if !same_space(delta.source(), space) || !same_space(delta.target(), space) {
        return Err(Error::SpaceMismatch("perturbation is not an endomorphism of the big module".into()));
    }
    Ok(())
}

/// Nilpotency depths and the obstruction `ψ = ∂² + d∂ + ∂d`.
#[derive(Clone, Debug)]
pub struct PerturbationDiagnostics {
    pub psi: GradedMap,
    /// Least `n` with `(h∂)ⁿι(x) = 0`, for each small-side basis vector `x`.
    pub inclusion_depths: Vec<(Basis, usize)>,
    /// Least `n` with `(∂h)ⁿ(y) = 0`, for each big-side basis vector `y`.
    pub projection_depths: Vec<(Basis, usize)>,
    pub obstructions: Vec<Violation>,
}

impl PerturbationDiagnostics {
    pub fn max_inclusion_depth(&self) -> usize {
        self.inclusion_depths.iter().map(|(_, n)| *n).max().unwrap_or(0)
    }

    pub fn max_projection_depth(&self) -> usize {
        self.projection_depths.iter().map(|(_, n)| *n).max().unwrap_or(0)
    }

    pub fn is_global(&self) -> bool {
        self.psi.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Passed,
    Failed,
    /// Computed and reported, but not asserted in this setting.
    Reported,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    pub witness: Option<Witness>,
}

impl CheckOutcome {
    pub fn from_report(name: &str, report: ValidationReport) -> Self {
        let witness = report.violations.into_iter().next().map(|v| v.witness);
        CheckOutcome {
            name: name.to_string(),
            status: if witness.is_none() {
                CheckStatus::Passed
            } else {
                CheckStatus::Failed
            },
            witness,
        }
    }

    pub fn reported(name: &str, witness: Option<Witness>) -> Self {
        let mut c = CheckOutcome::from_witness(name, witness);
        c.status = CheckStatus::Reported;
        c
    }

    pub fn from_witness(name: &str, witness: Option<Witness>) -> Self {
        CheckOutcome {
            name: name.to_string(),
            status: if witness.is_none() {
                CheckStatus::Passed
            } else {
                CheckStatus::Failed
            },
            witness,
        }
    }
}

/// The perturbed data and every check that was run on it.
#[derive(Clone, Debug)]
pub struct TransferResult {
    /// `ι_∂`.
    pub inclusion: GradedMap,
    /// `π_∂`.
    pub projection: GradedMap,
    /// `D_∂`.
    pub transferred: GradedMap,
    pub diagnostics: PerturbationDiagnostics,
    pub checks: Vec<CheckOutcome>,
}

impl TransferResult {
    /// `d_M + D_∂`.
    pub fn small_differential(&self, c: &Contraction) -> GradedMap {
        c.small.differential.add(&self.transferred).expect("same shape")
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub(crate) fn assert_checks(checks: &[CheckOutcome]) -> Result<()> {
    match checks.iter().find(|c| c.status == CheckStatus::Failed) {
        None => Ok(()),
        Some(c) => Err(Error::InternalAssertion(format!(
            "{}: {}",
            c.name,
            c.witness.as_ref().map(|w| w.to_string()).unwrap_or_default()
        ))),
    }
}

/// Check names used in transfer reports.
pub mod check {
    pub const SMALL_SQUARE_ZERO: &str = "(d_M + D)^2 = 0";
    pub const INCLUSION_CHAIN: &str = "iota_delta is a chain map";
    pub const PROJECTION_CHAIN: &str = "pi_delta is a chain map";
    pub const RETRACTION: &str = "pi_delta iota_delta = Id";
    pub const GAUGE_H_IOTA: &str = "h iota_delta = 0";
    pub const GAUGE_PI_IOTA: &str = "pi iota_delta = Id";
    pub const GAUGE_PI_H: &str = "pi_delta h = 0";
    pub const GAUGE_PI_DELTA_IOTA: &str = "pi_delta iota = Id";
    pub const GAUGE_STABLE: &str = "h (d + delta) iota_delta = 0";
    pub const FIXED_POINT: &str = "iota_delta = iota + h delta iota_delta";
    pub const DEFECT_FORMULA: &str = "iota_delta (d_M + D) - (d + delta) iota_delta = sum h (delta h)^n psi iota_delta";
    pub const D_PRESERVES: &str = "D maps the small part of A into itself";
    pub const SMALL_SQUARE_ZERO_RELATIVE: &str = "(d_M + D)^2 = 0 on the small part of A";
    pub const INCLUSION_CHAIN_RELATIVE: &str = "iota_delta is a chain map on the small part of A";
    pub const PROJECTION_CHAIN_RELATIVE: &str = "pi_delta is a chain map on A";
    pub const PROJECTION_DEFECT_RELATIVE: &str = "pi_delta chain-map defect on A";
    pub const TRANSFERRED_CODIFFERENTIAL: &str = "transferred family is a codifferential on symmetric tensors";
    pub const TRANSFERRED_CODERIVATION: &str = "D is the coderivation of its corestriction";
    pub const INCLUSION_MORPHISM: &str = "iota_delta is a coalgebra morphism";
    pub const RECURSION_AGREES: &str = "recursion and series agree for p iota_delta";
}

fn nilpotency_error(side: &'static str, max_iter: usize, src: &SpaceRef, b: Basis, tgt: &SpaceRef, v: &Vector) -> Error {
    Error::NotLocallyNilpotent {
        side,
        max_iter,
        witness: Witness::basis(src, b, tgt, v),
    }
}

/// Sums `start, step(start), step²(start), …` until the iterate vanishes.
/// Returns the sum (after `apply`) and the number of nonzero iterates.
fn sum_series(
    start: Vector,
    step: &GradedMap,
    apply: impl Fn(&Vector) -> Vector,
    max_iter: usize,
) -> std::result::Result<(Vector, usize), Vector> {
    let mut sum = Vector::new();
    let mut v = start;
    for n in 0..=max_iter {
        if v.is_zero() {
            return Ok((sum, n));
        }
        if n == max_iter {
            break;
        }
        sum = &sum + &apply(&v);
        v = step.apply(&v);
    }
    Err(v)
}

struct Series {
    map: GradedMap,
    depths: Vec<(Basis, usize)>,
}

fn inclusion_series(c: &Contraction, delta: &GradedMap, max_iter: usize) -> Result<Series> {
    check_delta_shape(&c.big.space, delta)?;
    let h_delta = c.homotopy.compose(delta)?;
    let small = c.small.space.basis();
    let results = exec::try_map_indexed(&small, |&x| {
        sum_series(c.incl.image(x), &h_delta, Vector::clone, max_iter)
            .map_err(|v| nilpotency_error("(h delta)^n iota", max_iter, &c.small.space, x, &c.big.space, &v))
    })?;
    assemble(&c.small.space, &c.big.space, 0, small, results)
}

fn projection_series(c: &Contraction, delta: &GradedMap, max_iter: usize) -> Result<Series> {
    check_delta_shape(&c.big.space, delta)?;
    let delta_h = delta.compose(&c.homotopy)?;
    let big = c.big.space.basis();
    let results = exec::try_map_indexed(&big, |&y| {
        sum_series(Vector::basis(y), &delta_h, |v| c.proj.apply(v), max_iter)
            .map_err(|v| nilpotency_error("(delta h)^n", max_iter, &c.big.space, y, &c.big.space, &v))
    })?;
    assemble(&c.big.space, &c.small.space, 0, big, results)
}

fn assemble(
    source: &SpaceRef,
    target: &SpaceRef,
    degree: i32,
    basis: Vec<Basis>,
    results: Vec<(Vector, usize)>,
) -> Result<Series> {
    let mut images = std::collections::HashMap::new();
    let mut depths = Vec::with_capacity(basis.len());
    for (b, (v, n)) in basis.into_iter().zip(results) {
        depths.push((b, n));
        images.insert(b, v);
    }
    let map = GradedMap::from_fn(source, target, degree, |b| images[&b].clone());
    Ok(Series { map, depths })
}

/// `ψ = ∂² + d∂ + ∂d`, the failure of `d + ∂` to square to zero.
pub fn psi(d: &GradedMap, delta: &GradedMap) -> Result<GradedMap> {
    let dd = delta.compose(delta)?;
    let a = d.compose(delta)?;
    let b = delta.compose(d)?;
    dd.add(&a)?.add(&b)
}

/// Iteration depths of both series and the obstruction `ψ`; fails with the
/// first basis vector whose iterates do not vanish within `max_iter` steps.
pub fn check_nilpotency(c: &Contraction, delta: &GradedMap, max_iter: usize) -> Result<PerturbationDiagnostics> {
    let inc = inclusion_series(c, delta, max_iter)?;
    let proj = projection_series(c, delta, max_iter)?;
    Ok(PerturbationDiagnostics {
        psi: psi(&c.big.differential, delta)?,
        inclusion_depths: inc.depths,
        projection_depths: proj.depths,
        obstructions: Vec::new(),
    })
}

/// `ι_∂ = Σ (h∂)ⁿ ι`.
pub fn perturbed_inclusion(c: &Contraction, delta: &GradedMap, max_iter: usize) -> Result<GradedMap> {
    Ok(inclusion_series(c, delta, max_iter)?.map)
}

/// `π_∂ = Σ π(∂h)ⁿ`.
pub fn perturbed_projection(c: &Contraction, delta: &GradedMap, max_iter: usize) -> Result<GradedMap> {
    Ok(projection_series(c, delta, max_iter)?.map)
}

/// `D_∂`, computed as both `π∂ι_∂` and `π_∂∂ι` and asserted equal.
pub fn transferred_differential(c: &Contraction, delta: &GradedMap, max_iter: usize) -> Result<GradedMap> {
    let i_d = perturbed_inclusion(c, delta, max_iter)?;
    let p_d = perturbed_projection(c, delta, max_iter)?;
    transferred_from(c, delta, &i_d, &p_d)
}

fn transferred_from(c: &Contraction, delta: &GradedMap, i_d: &GradedMap, p_d: &GradedMap) -> Result<GradedMap> {
    let one = c.proj.compose(&delta.compose(i_d)?)?;
    let two = p_d.compose(&delta.compose(&c.incl)?)?;
    if let Some((b, x, y)) = one.difference_witness(&two) {
        return Err(Error::InternalAssertion(format!(
            "pi delta iota_delta and pi_delta delta iota differ on {}: {} vs {}",
            c.small.space.label(b),
            c.small.space.render(&x),
            c.small.space.render(&y)
        )));
    }
    Ok(one)
}

pub(crate) struct Perturbed {
    pub inclusion: GradedMap,
    pub projection: GradedMap,
    pub transferred: GradedMap,
    pub diagnostics: PerturbationDiagnostics,
}

pub(crate) fn perturb(c: &Contraction, delta: &GradedMap, max_iter: usize) -> Result<Perturbed> {
    let inc = inclusion_series(c, delta, max_iter)?;
    let proj = projection_series(c, delta, max_iter)?;
    let transferred = transferred_from(c, delta, &inc.map, &proj.map)?;
    Ok(Perturbed {
        diagnostics: PerturbationDiagnostics {
            psi: psi(&c.big.differential, delta)?,
            inclusion_depths: inc.depths,
            projection_depths: proj.depths,
            obstructions: Vec::new(),
        },
        inclusion: inc.map,
        projection: proj.map,
        transferred,
    })
}

fn cm(m: Result<GradedMap>) -> GradedMap {
    m.expect("shapes are consistent")
}

/// Identities that hold for every locally nilpotent `∂`, global or not.
pub(crate) fn gauge_checks(c: &Contraction, delta: &GradedMap, p: &Perturbed) -> Vec<CheckOutcome> {
    let (i_d, p_d) = (&p.inclusion, &p.projection);
    let id_small = GradedMap::identity(&c.small.space);
    let mut out = Vec::new();
    let mut eq = |name: &str, lhs: GradedMap, rhs: &GradedMap| {
        let mut r = ValidationReport::default();
        r.expect_equal(name, &lhs, rhs);
        out.push(CheckOutcome::from_report(name, r));
    };
    eq(check::RETRACTION, cm(p_d.compose(i_d)), &id_small);
    eq(check::GAUGE_PI_IOTA, cm(c.proj.compose(i_d)), &id_small);
    eq(check::GAUGE_PI_DELTA_IOTA, cm(p_d.compose(&c.incl)), &id_small);
    let zero_i = GradedMap::zero(&c.small.space, &c.big.space, -1);
    eq(check::GAUGE_H_IOTA, cm(c.homotopy.compose(i_d)), &zero_i);
    let zero_p = GradedMap::zero(&c.big.space, &c.small.space, -1);
    eq(check::GAUGE_PI_H, cm(p_d.compose(&c.homotopy)), &zero_p);
    let fixed = cm(c.incl.add(&cm(c.homotopy.compose(&cm(delta.compose(i_d))))));
    eq(check::FIXED_POINT, fixed, i_d);
    out
}

/// The ordinary perturbation lemma for a global perturbation: returns `ι_∂`,
/// `π_∂`, `D_∂` after asserting `(d_M + D_∂)² = 0`, that both perturbed maps
/// are chain maps, and the gauge identities.
pub fn ordinary_transfer(c: &Contraction, p: &Perturbation, max_iter: usize) -> Result<TransferResult> {
    if !p.ambient.same_as(&c.big) {
        return Err(Error::SpaceMismatch("perturbation is not on the contraction's big module".into()));
    }
    let total = p.perturbed_differential();
    let square = cm(total.compose(&total));
    if let Some((b, v)) = square.nonzero_witness() {
        return Err(Error::NotAPerturbation(Witness::basis(&c.big.space, b, &c.big.space, &v)));
    }
    let delta = &p.delta;
    let pert = perturb(c, delta, max_iter)?;
    let mut checks = gauge_checks(c, delta, &pert);
    let small_d = cm(c.small.differential.add(&pert.transferred));
    let mut r = ValidationReport::default();
    r.expect_zero(check::SMALL_SQUARE_ZERO, &cm(small_d.compose(&small_d)));
    checks.push(CheckOutcome::from_report(check::SMALL_SQUARE_ZERO, r));
    let mut r = ValidationReport::default();
    r.expect_equal(
        check::INCLUSION_CHAIN,
        &cm(pert.inclusion.compose(&small_d)),
        &cm(total.compose(&pert.inclusion)),
    );
    checks.push(CheckOutcome::from_report(check::INCLUSION_CHAIN, r));
    let mut r = ValidationReport::default();
    r.expect_equal(
        check::PROJECTION_CHAIN,
        &cm(pert.projection.compose(&total)),
        &cm(small_d.compose(&pert.projection)),
    );
    checks.push(CheckOutcome::from_report(check::PROJECTION_CHAIN, r));
    let mut r = ValidationReport::default();
    r.expect_zero(
        check::GAUGE_STABLE,
        &cm(c.homotopy.compose(&cm(total.compose(&pert.inclusion)))),
    );
    checks.push(CheckOutcome::from_report(check::GAUGE_STABLE, r));
    assert_checks(&checks)?;
    Ok(TransferResult {
        inclusion: pert.inclusion,
        projection: pert.projection,
        transferred: pert.transferred,
        diagnostics: pert.diagnostics,
        checks,
    })
}

/// Whether `(ιi)_∂ = ι_∂ i_{D_∂}` for the composite of `outer` (small side) and
/// `inner` (big side), where `i_{D_∂}` perturbs `outer` by the transferred
/// perturbation of `inner`.
pub fn composition_compatibility_check(
    outer: &Contraction,
    inner: &Contraction,
    delta: &GradedMap,
    max_iter: usize,
) -> Result<bool> {
    let composite = compose_contractions(outer, inner)?;
    let lhs = perturbed_inclusion(&composite, delta, max_iter)?;
    let i_delta = perturbed_inclusion(inner, delta, max_iter)?;
    let d_delta = transferred_differential(inner, delta, max_iter)?;
    let outer_delta = perturbed_inclusion(outer, &d_delta, max_iter)?;
    let rhs = i_delta.compose(&outer_delta)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::{homology_contraction, Contraction};
    use crate::scalar::int;
    use crate::space::GradedSpace;

    // N = {m(0), x(0), y(1)}, dx = y, M = {m}, h(y) = -x.
    fn looping() -> (Contraction, GradedMap) {
        let n = GradedSpace::from_labels(&[(0, &["m", "x"]), (1, &["y"])]).unwrap();
        let (m, x, y) = (Basis::new(0, 0), Basis::new(0, 1), Basis::new(1, 0));
        let d = GradedMap::from_entries(&n, &n, 1, [(x, y, int(1))]).unwrap();
        let big = DGModule::new(&n, d).unwrap();
        let c = homology_contraction(&big);
        let delta = GradedMap::from_entries(&n, &n, 1, [(m, y, int(1)), (x, y, int(-1))]).unwrap();
        (c, delta)
    }

    #[test]
    fn zero_perturbation_gives_original_maps() {
        let (c, delta) = looping();
        let zero = GradedMap::zero(&c.big.space, &c.big.space, 1);
        let diag = check_nilpotency(&c, &zero, 3).unwrap();
        assert_eq!(diag.max_inclusion_depth(), 1);
        assert_eq!(perturbed_inclusion(&c, &zero, 3).unwrap(), c.incl);
        assert_eq!(perturbed_projection(&c, &zero, 3).unwrap(), c.proj);
        assert!(transferred_differential(&c, &zero, 3).unwrap().is_zero());
        let _ = delta;
    }

    #[test]
    fn eigenvector_loop_is_not_nilpotent() {
        let (c, delta) = looping();
        match check_nilpotency(&c, &delta, 10) {
            Err(Error::NotLocallyNilpotent { max_iter, .. }) => assert_eq!(max_iter, 10),
            other => panic!("expected nilpotency failure, got {other:?}"),
        }
    }

    #[test]
    fn identity_contraction_transfers_delta() {
        let n = GradedSpace::from_labels(&[(0, &["x"]), (1, &["y"])]).unwrap();
        let c = Contraction::identity(&DGModule::trivial(&n));
        let delta = GradedMap::from_entries(&n, &n, 1, [(Basis::new(0, 0), Basis::new(1, 0), int(5))]).unwrap();
        assert_eq!(perturbed_inclusion(&c, &delta, 2).unwrap(), c.incl);
        assert_eq!(transferred_differential(&c, &delta, 2).unwrap(), delta);
        let p = Perturbation::global(&c.big, delta).unwrap();
        let r = ordinary_transfer(&c, &p, 2).unwrap();
        assert!(r.checks.iter().all(|c| c.status == CheckStatus::Passed));
    }

    #[test]
    fn ordinary_rejects_non_perturbation() {
        let n = GradedSpace::from_labels(&[(0, &["x"]), (1, &["y"]), (2, &["z"])]).unwrap();
        let c = Contraction::identity(&DGModule::trivial(&n));
        let delta = GradedMap::from_entries(
            &n,
            &n,
            1,
            [(Basis::new(0, 0), Basis::new(1, 0), int(1)), (Basis::new(1, 0), Basis::new(2, 0), int(1))],
        )
        .unwrap();
        let p = Perturbation::global(&c.big, delta).unwrap();
        assert!(matches!(ordinary_transfer(&c, &p, 3), Err(Error::NotAPerturbation(_))));
    }

    #[test]
    fn delta_shape_is_checked() {
        let (c, _) = looping();
        let wrong = GradedMap::zero(&c.big.space, &c.big.space, 0);
        assert!(matches!(perturbed_inclusion(&c, &wrong, 3), Err(Error::DegreeMismatch(_))));
    }
}
