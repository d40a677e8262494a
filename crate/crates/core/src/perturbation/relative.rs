use crate::complex::{ValidationReport, Witness};
use crate::contraction::Contraction;
use crate::error::{Error, Hypothesis, Result};
use crate::map::GradedMap;
use crate::space::{same_space, SpaceRef};
use crate::subspace::Subspace;
use crate::vector::Vector;

use super::{assert_checks, check, gauge_checks, perturb, CheckOutcome, Perturbation, TransferResult};

fn first_outside<'a>(
    inputs: &'a [Vector],
    map: impl Fn(&Vector) -> Vector,
    target: &Subspace,
) -> Option<(&'a Vector, Vector)> {
    inputs.iter().find_map(|v| {
        let image = map(v);
        (!target.contains(&image)).then_some((v, image))
    })
}

fn first_nonzero<'a>(inputs: &'a [Vector], map: impl Fn(&Vector) -> Vector) -> Option<(&'a Vector, Vector)> {
    inputs.iter().find_map(|v| {
        let image = map(v);
        (!image.is_zero()).then_some((v, image))
    })
}

fn hypothesis(which: Hypothesis, src: &SpaceRef, v: &Vector, tgt: &SpaceRef, image: &Vector) -> Error {
    Error::HypothesisFailed {
        which,
        witness: Witness::vector(src, v, tgt, image),
    }
}

fn on_inputs(name: &str, found: Option<(&Vector, Vector)>, src: &SpaceRef, tgt: &SpaceRef) -> CheckOutcome {
    CheckOutcome::from_witness(name, found.map(|(v, img)| Witness::vector(src, v, tgt, &img)))
}

/// The relative perturbation lemma. `p` is a perturbation of `d_N` over a
/// subcomplex `A` (the whole space when `p.over` is absent) and `small_part`
/// is `A ∩ M` inside the small module. Checks, in order: `d(A) ⊂ A`,
/// `∂(A) ⊂ A`, `(d+∂)²(A) = 0`, local nilpotency, `π(A) ⊂ A∩M` and
/// `ι_∂(A∩M) ⊂ A`. Then asserts that `D_∂` is a perturbation of `d_M` over
/// `A∩M` and that `ι_∂` is a chain map there. When `h(A) ⊂ A` it also asserts
/// that `π_∂` is a chain map on `A`; otherwise the defect is only reported.
pub fn relative_transfer(
    c: &Contraction,
    p: &Perturbation,
    small_part: &Subspace,
    max_iter: usize,
) -> Result<TransferResult> {
    if !p.ambient.same_as(&c.big) {
        return Err(Error::SpaceMismatch("perturbation is not on the contraction's big module".into()));
    }
    if !same_space(small_part.space(), &c.small.space) {
        return Err(Error::SpaceMismatch("A ∩ M must be a subspace of the small module".into()));
    }
    let whole = Subspace::Whole(c.big.space.clone());
    let a = p.over.as_ref().unwrap_or(&whole);
    let big = &c.big.space;
    let small = &c.small.space;
    let d = &c.big.differential;
    let delta = &p.delta;
    let total = p.perturbed_differential();
    let a_span = a.spanning();

    if let Some((v, img)) = first_outside(&a_span, |v| d.apply(v), a) {
        return Err(hypothesis(Hypothesis::Subcomplex, big, v, big, &img));
    }
    if let Some((v, img)) = first_outside(&a_span, |v| delta.apply(v), a) {
        return Err(hypothesis(Hypothesis::DeltaStable, big, v, big, &img));
    }
    if let Some((v, img)) = first_nonzero(&a_span, |v| total.apply(&total.apply(v))) {
        return Err(hypothesis(Hypothesis::SquareZero, big, v, big, &img));
    }

    let pert = perturb(c, delta, max_iter)?;

    if let Some((v, img)) = first_outside(&a_span, |v| c.proj.apply(v), small_part) {
        return Err(hypothesis(Hypothesis::ProjectionInto, big, v, small, &img));
    }
    let m_span = small_part.spanning();
    if let Some((v, img)) = first_outside(&m_span, |v| pert.inclusion.apply(v), a) {
        return Err(hypothesis(Hypothesis::PerturbedInclusionInto, small, v, big, &img));
    }

    let mut checks = gauge_checks(c, delta, &pert);
    let small_d = c.small.differential.add(&pert.transferred)?;
    checks.push(on_inputs(
        check::D_PRESERVES,
        first_outside(&m_span, |v| pert.transferred.apply(v), small_part),
        small,
        small,
    ));
    checks.push(on_inputs(
        check::SMALL_SQUARE_ZERO_RELATIVE,
        first_nonzero(&m_span, |v| small_d.apply(&small_d.apply(v))),
        small,
        small,
    ));
    let incl_defect = pert.inclusion.compose(&small_d)?.sub(&total.compose(&pert.inclusion)?)?;
    checks.push(on_inputs(
        check::INCLUSION_CHAIN_RELATIVE,
        first_nonzero(&m_span, |v| incl_defect.apply(v)),
        small,
        big,
    ));
    checks.push(defect_formula(c, delta, &pert.diagnostics.psi, &pert.inclusion, &incl_defect, max_iter)?);

    let proj_defect = pert.projection.compose(&total)?.sub(&small_d.compose(&pert.projection)?)?;
    let found = first_nonzero(&a_span, |v| proj_defect.apply(v));
    let h_stable = first_outside(&a_span, |v| c.homotopy.apply(v), a).is_none();
    if h_stable {
        checks.push(on_inputs(check::PROJECTION_CHAIN_RELATIVE, found, big, small));
    } else {
        checks.push(CheckOutcome::reported(
            check::PROJECTION_DEFECT_RELATIVE,
            found.map(|(v, img)| Witness::vector(big, v, small, &img)),
        ));
    }
    assert_checks(&checks)?;
    Ok(TransferResult {
        inclusion: pert.inclusion,
        projection: pert.projection,
        transferred: pert.transferred,
        diagnostics: pert.diagnostics,
        checks,
    })
}

/// `ι_∂(d_M + D_∂) − (d + ∂)ι_∂ = Σ_n h(∂h)ⁿ ψ ι_∂` as an identity of maps on `M`.
fn defect_formula(
    c: &Contraction,
    delta: &GradedMap,
    psi: &GradedMap,
    inclusion: &GradedMap,
    defect: &GradedMap,
    max_iter: usize,
) -> Result<CheckOutcome> {
    let delta_h = delta.compose(&c.homotopy)?;
    let start = psi.compose(inclusion)?;
    let rhs = GradedMap::try_from_fn(&c.small.space, &c.big.space, 1, |x| {
        let mut v = start.image(x);
        let mut sum = Vector::new();
        for _ in 0..=max_iter {
            if v.is_zero() {
                return Ok(c.homotopy.apply(&sum));
            }
            sum = &sum + &v;
            v = delta_h.apply(&v);
        }
        Err(Error::NotLocallyNilpotent {
            side: "(delta h)^n psi iota_delta",
            max_iter,
            witness: Witness::basis(&c.small.space, x, &c.big.space, &v),
        })
    })?;
    let mut r = ValidationReport::default();
    r.expect_equal(check::DEFECT_FORMULA, defect, &rhs);
    Ok(CheckOutcome::from_report(check::DEFECT_FORMULA, r))
}
