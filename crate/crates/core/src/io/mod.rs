//! Problem files and reports.
//!
//! A problem file is line oriented. `#` starts a comment. The first line is the
//! version header `hpt 1`; the rest is a sequence of sections:
//!
//! ```text
//! hpt 1
//!
//! [settings]
//! mode = linfty
//! max-weight = 3
//!
//! [generators]
//! degree -2: s z
//! degree -1: a b c t
//!
//! [differential]
//! s → t : 1
//!
//! [corestriction]
//! a⊗b → t : 1/2
//! b⊗a → t : -1/2
//! ```
//!
//! Map sections hold `source → target : coefficient` entries; `->` and `*` are
//! accepted for `→` and `⊗`. Subspace sections hold one vector per line, written
//! `c label + c label`.

mod format;
mod parse;
pub mod report;

pub use format::format_problem;
pub use parse::parse_problem;

use serde::Serialize;

use crate::coalgebra::{CoderivationSpec, TruncatedCoalgebra};
use crate::complex::DGModule;
use crate::contraction::{homology_contraction, Contraction};
use crate::error::{Error, Result};
use crate::map::GradedMap;
use crate::scalar::Scalar;
use crate::space::{Basis, SpaceRef, Word};
use crate::symmetric::Side;
use crate::vector::Vector;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ordinary,
    Relative,
    Linfty,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Ordinary => "ordinary",
            Mode::Relative => "relative",
            Mode::Linfty => "linfty",
        }
    }

    pub fn from_name(s: &str) -> Option<Mode> {
        match s {
            "ordinary" => Some(Mode::Ordinary),
            "relative" => Some(Mode::Relative),
            "linfty" => Some(Mode::Linfty),
            _ => None,
        }
    }
}

pub fn side_name(side: Side) -> &'static str {
    match side {
        Side::Symmetric => "symmetric",
        Side::Tensor => "tensor",
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    pub mode: Option<Mode>,
    pub max_weight: Option<usize>,
    pub max_iter: Option<usize>,
    /// Where the codifferential criterion is checked by `validate`.
    pub side: Option<Side>,
}

/// The subgenerators `W` with `ι: W -> V`, `π: V -> W` and `k: V -> V`.
#[derive(Clone, Debug)]
pub struct SubData {
    pub space: SpaceRef,
    pub inclusion: GradedMap,
    pub projection: GradedMap,
    pub homotopy: GradedMap,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub settings: Settings,
    pub generators: SpaceRef,
    pub differential: GradedMap,
    pub sub: Option<SubData>,
    pub perturbation: Option<GradedMap>,
    pub subcomplex: Option<Vec<Vector>>,
    pub small_subcomplex: Option<Vec<Vector>>,
    /// Entries of `q_n` for `n ≥ 2`; `q_1` is the differential.
    pub corestriction: Option<Vec<(Word, Basis, Scalar)>>,
}

impl Problem {
    pub fn module(&self) -> DGModule {
        DGModule::new(&self.generators, self.differential.clone()).expect("degree checked at parse time")
    }

    /// The declared contraction, or the homology contraction of `V` when no
    /// subgenerators are given. The differential of `W` is `π d ι`.
    pub fn contraction(&self) -> Result<Contraction> {
        let big = self.module();
        let Some(sub) = &self.sub else {
            return Ok(homology_contraction(&big));
        };
        let d_w = sub.projection.compose(&self.differential.compose(&sub.inclusion)?)?;
        let small = DGModule::new(&sub.space, d_w)?;
        Contraction::new(
            big,
            small,
            sub.inclusion.clone(),
            sub.projection.clone(),
            sub.homotopy.clone(),
        )
    }

    /// `q = d + Σ_{n≥2} q_n` on `T̄_{≤W}(V)`; entries longer than `W` are dropped.
    pub fn codifferential(&self, max_weight: usize) -> Result<CoderivationSpec> {
        let amb = TruncatedCoalgebra::new(&self.generators, max_weight)?;
        let linear = CoderivationSpec::from_linear(&amb, &self.differential)?;
        let entries = self.corestriction.iter().flatten().filter(|(w, _, _)| w.len() <= max_weight).cloned();
        let higher = CoderivationSpec::from_terms(&amb, 1, entries)?;
        linear.add(&higher)
    }

    pub fn has_corestriction(&self) -> bool {
        self.corestriction.as_ref().is_some_and(|c| !c.is_empty())
    }

    /// The problem for a contraction of generators with a codifferential whose
    /// corestriction lives on the contraction's big side.
    pub fn from_linfty(c: &Contraction, q: &CoderivationSpec, settings: Settings) -> Result<Problem> {
        let amb = q.ambient();
        let mut corestriction = Vec::new();
        for (src, tgt, coeff) in q.corestriction().entries() {
            let w = amb.word(src).clone();
            if w.len() >= 2 {
                corestriction.push((w, tgt, coeff));
            }
        }
        if q.linear_part() != c.big.differential {
            return Err(Error::Semantic("linear part of q differs from the differential".into()));
        }
        Ok(Problem {
            settings,
            generators: c.big.space.clone(),
            differential: c.big.differential.clone(),
            sub: Some(SubData {
                space: c.small.space.clone(),
                inclusion: c.incl.clone(),
                projection: c.proj.clone(),
                homotopy: c.homotopy.clone(),
            }),
            perturbation: None,
            subcomplex: None,
            small_subcomplex: None,
            corestriction: Some(corestriction),
        })
    }
}
