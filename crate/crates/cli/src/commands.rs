use std::path::Path;

use hpt_core::builtins;
use hpt_core::coalgebra::{is_coalgebra_contraction, tensor_trick, Domain};
use hpt_core::complex::{check_complex, Witness};
use hpt_core::contraction::validate_contraction;
use hpt_core::error::{Error, Result};
use hpt_core::io::report::{NamedMap, Report};
use hpt_core::io::{format_problem, parse_problem, side_name, Mode, Problem, Settings};
use hpt_core::perturbation::{
    linfty_transfer, ordinary_transfer, relative_transfer, CheckOutcome, LinftyResult, Perturbation, TransferResult,
};
use hpt_core::subspace::{Span, Subspace};
use hpt_core::symmetric::{encode_bilinear, is_codifferential, sl2, Encoding, Side};

use crate::{Options, WEIGHT_ENV};

const DEFAULT_WEIGHT: usize = 3;
const DEFAULT_DEMO_WEIGHT: usize = 4;
const DEFAULT_MAX_ITER: usize = 100;

fn env_weight() -> Result<Option<usize>> {
    match std::env::var(WEIGHT_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Semantic(format!("{WEIGHT_ENV} must be a positive integer, got `{s}`"))),
        Err(_) => Ok(None),
    }
}

/// Flag, then file setting, then environment, then `fallback`.
fn max_weight(opts: &Options, file: Option<usize>, fallback: usize) -> Result<usize> {
    let w = match opts.max_weight.or(file) {
        Some(w) => w,
        None => env_weight()?.unwrap_or(fallback),
    };
    if w == 0 {
        return Err(Error::Semantic("max weight must be at least 1".into()));
    }
    Ok(w)
}

fn max_iter(opts: &Options, file: Option<usize>) -> usize {
    opts.max_iter.or(file).unwrap_or(DEFAULT_MAX_ITER)
}

fn load(path: &Path) -> Result<Problem> {
    let name = path.to_string_lossy();
    if let Some(builtin) = name.strip_prefix("builtin:") {
        let weight = env_weight()?.unwrap_or(DEFAULT_WEIGHT);
        let ex = builtins::by_name(builtin, weight).ok_or_else(|| {
            Error::Semantic(format!(
                "unknown builtin `{builtin}`; available: {}",
                builtins::NAMES.join(", ")
            ))
        })??;
        let settings = Settings {
            mode: Some(Mode::Linfty),
            ..Default::default()
        };
        return Problem::from_linfty(&ex.contraction, &ex.codifferential, settings);
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Semantic(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text)
}

fn mode_of(problem: &Problem, opts: &Options) -> Mode {
    opts.mode
        .map(Mode::from)
        .or(problem.settings.mode)
        .unwrap_or(if problem.has_corestriction() {
            Mode::Linfty
        } else {
            Mode::Ordinary
        })
}

fn finish(mut report: Report, result: Result<()>) -> Report {
    if let Err(e) = result {
        report.fail_with(&e);
    }
    report
}

pub fn validate(path: &Path, opts: &Options, side: Option<Side>) -> Report {
    let mut report = Report::new("validate", None);
    let result = (|| {
        let problem = load(path)?;
        let mode = mode_of(&problem, opts);
        report.mode = Some(mode.name().to_string());
        report.push_validation("generators form a complex", check_complex(&problem.module()));
        let c = problem.contraction()?;
        if problem.sub.is_none() {
            report.notes.push("no subgenerators given; using the homology contraction".into());
        }
        report.push_validation("contraction axioms", validate_contraction(&c));
        if let (Some(delta), false) = (&problem.perturbation, mode == Mode::Relative) {
            let total = problem.differential.add(delta)?;
            let square = total.compose(&total)?;
            let witness = square
                .nonzero_witness()
                .map(|(b, v)| Witness::basis(&problem.generators, b, &problem.generators, &v));
            report.push_check(CheckOutcome::from_witness("(d + delta)^2 = 0", witness));
        }
        if problem.has_corestriction() || mode == Mode::Linfty {
            let side = side.or(problem.settings.side).unwrap_or(Side::Symmetric);
            let w = max_weight(opts, problem.settings.max_weight, DEFAULT_WEIGHT)?;
            report.notes.push(format!("max weight {w}, {} side", side_name(side)));
            let q = problem.codifferential(w)?;
            let verdict = is_codifferential(&q, side)?;
            report.push_check(CheckOutcome::from_witness("pQ^2 = 0", verdict.err()));
            let domain = match side {
                Side::Symmetric => Domain::Invariants,
                Side::Tensor => Domain::Words,
            };
            let cc = tensor_trick(&c, w)?;
            report.push_validation("tensor trick gives a coalgebra contraction", is_coalgebra_contraction(&cc, domain));
        }
        Ok(())
    })();
    finish(report, result)
}

fn push_transfer(report: &mut Report, r: &TransferResult, small_differential: hpt_core::map::GradedMap) {
    for c in &r.checks {
        report.push_check(c.clone());
    }
    report.notes.push(format!(
        "series depths: inclusion {}, projection {}",
        r.diagnostics.max_inclusion_depth(),
        r.diagnostics.max_projection_depth()
    ));
    report.maps.push(NamedMap::new("transferred perturbation D", &r.transferred));
    report.maps.push(NamedMap::new("small differential d + D", &small_differential));
    report.maps.push(NamedMap::new("perturbed inclusion", &r.inclusion));
    report.maps.push(NamedMap::new("perturbed projection", &r.projection));
}

fn push_linfty(report: &mut Report, r: &LinftyResult) {
    for c in &r.transfer.checks {
        report.push_check(c.clone());
    }
    report.brackets = r.brackets.clone();
    report.inclusion_family = r.inclusion_constants.clone();
    let top = r.brackets.iter().map(|s| s.arity).max().unwrap_or(0);
    report.notes.push(format!("highest nonzero bracket arity: {top}"));
}

fn span(vectors: &[hpt_core::vector::Vector], space: &hpt_core::space::SpaceRef) -> Result<Subspace> {
    Ok(Subspace::Span(Span::new(space, vectors.iter().cloned())?))
}

pub fn transfer(path: &Path, opts: &Options) -> Report {
    let mut report = Report::new("transfer", None);
    let result = (|| {
        let problem = load(path)?;
        let mode = mode_of(&problem, opts);
        report.mode = Some(mode.name().to_string());
        let iters = max_iter(opts, problem.settings.max_iter);
        let c = problem.contraction()?;
        let zero = || hpt_core::map::GradedMap::zero(&problem.generators, &problem.generators, 1);
        match mode {
            Mode::Ordinary => {
                let delta = problem.perturbation.clone().unwrap_or_else(zero);
                let p = Perturbation::global(&c.big, delta)?;
                let r = ordinary_transfer(&c, &p, iters)?;
                push_transfer(&mut report, &r, r.small_differential(&c));
            }
            Mode::Relative => {
                let delta = problem.perturbation.clone().unwrap_or_else(zero);
                let a = match &problem.subcomplex {
                    Some(vs) => span(vs, &c.big.space)?,
                    None => Subspace::Whole(c.big.space.clone()),
                };
                let am = match &problem.small_subcomplex {
                    Some(vs) => span(vs, &c.small.space)?,
                    None => Subspace::Whole(c.small.space.clone()),
                };
                let p = Perturbation::over(&c.big, delta, a)?;
                let r = relative_transfer(&c, &p, &am, iters)?;
                push_transfer(&mut report, &r, r.small_differential(&c));
            }
            Mode::Linfty => {
                if problem.perturbation.is_some() {
                    return Err(Error::Semantic(
                        "linfty mode takes the perturbation from [corestriction], not [perturbation]".into(),
                    ));
                }
                let w = max_weight(opts, problem.settings.max_weight, DEFAULT_WEIGHT)?;
                report.notes.push(format!("max weight {w}"));
                let q = problem.codifferential(w)?;
                let r = linfty_transfer(&c, &q, iters)?;
                push_linfty(&mut report, &r);
            }
        }
        Ok(())
    })();
    finish(report, result)
}

pub fn demo_sl2(opts: &Options) -> Report {
    let mut report = Report::new("demo-sl2", Some("linfty"));
    let result = (|| {
        let w = max_weight(opts, None, DEFAULT_DEMO_WEIGHT)?.max(3);
        let table = sl2();
        let space = table.space().clone();
        let n = table.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let a = space.label(hpt_core::space::Basis::new(0, i));
                let b = space.label(hpt_core::space::Basis::new(0, j));
                report.notes.push(format!("[{a}, {b}] = {}", space.render(&table.product(i, j))));
            }
        }
        report.push_check(CheckOutcome::from_witness(
            "antisymmetry",
            (!table.is_antisymmetric()).then(|| Witness::new("bracket table", "not antisymmetric")),
        ));
        let jacobi = table.jacobi_witness().map(|(i, j, k, v)| {
            let l = |x| space.label(hpt_core::space::Basis::new(0, x)).to_string();
            Witness::new(format!("{}, {}, {}", l(i), l(j), l(k)), space.render(&v))
        });
        report.push_check(CheckOutcome::from_witness("Jacobi identity", jacobi));
        let q = encode_bilinear(&table, Encoding::Lie, w)?;
        report.push_check(CheckOutcome::from_witness(
            "pQ^2 = 0 on symmetric tensors",
            is_codifferential(&q, Side::Symmetric)?.err(),
        ));
        report.push_expected_failure(
            "pQ^2 != 0 on some tensor word",
            is_codifferential(&q, Side::Tensor)?.err(),
        );
        let ex = builtins::sl2_example(w)?;
        report.notes.push(format!("transfer along the identity contraction, max weight {w}"));
        let r = linfty_transfer(&ex.contraction, &ex.codifferential, max_iter(opts, None))?;
        push_linfty(&mut report, &r);
        Ok(())
    })();
    finish(report, result)
}

pub fn format(path: &Path) -> std::result::Result<String, Report> {
    load(path).map(|p| format_problem(&p)).map_err(|e| {
        let mut r = Report::new("format", None);
        r.fail_with(&e);
        r
    })
}
