use thiserror::Error;

use crate::complex::Witness;

/// Which hypothesis of a relative perturbation problem failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Hypothesis {
    /// The designated subspace is not a subcomplex of the unperturbed module.
    Subcomplex,
    /// The perturbation does not map the subspace into itself.
    DeltaStable,
    /// `(d + delta)^2` does not vanish on the subspace.
    SquareZero,
    /// The projection does not map the subspace into its small-side part.
    ProjectionInto,
    /// The perturbed inclusion does not map the small-side part into the subspace.
    PerturbedInclusionInto,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Hypothesis::Subcomplex => "subspace is a subcomplex",
            Hypothesis::DeltaStable => "delta-stability",
            Hypothesis::SquareZero => "square-zero on subspace",
            Hypothesis::ProjectionInto => "projection lands in the small part",
            Hypothesis::PerturbedInclusionInto => "perturbed inclusion lands in the subspace",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid graded space: {0}")]
    InvalidSpace(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("precondition failed ({condition}): {witness}")]
    PreconditionFailed { condition: String, witness: Witness },
    #[error("not a morphism of contractions: {0}")]
    MorphismInvalid(Witness),
    #[error("perturbation is not locally nilpotent after {max_iter} iterations ({side}): {witness}")]
    NotLocallyNilpotent {
        side: &'static str,
        max_iter: usize,
        witness: Witness,
    },
    #[error("not a perturbation, (d + delta)^2 != 0: {0}")]
    NotAPerturbation(Witness),
    #[error("hypothesis failed [{which}]: {witness}")]
    HypothesisFailed { which: Hypothesis, witness: Witness },
    #[error("not a codifferential, pQ^2 != 0: {0}")]
    NotACodifferential(Witness),
    #[error("degree error: {0}")]
    DegreeError(String),
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("semantic error: {0}")]
    Semantic(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
