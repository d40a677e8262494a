//! Command reports. Everything here is deterministic: no timestamps, and every
//! list is in basis or lexicographic order.

use std::fmt::Write;

use serde::Serialize;

use crate::complex::{ValidationReport, Witness};
use crate::error::Error;
use crate::map::GradedMap;
use crate::perturbation::{CheckOutcome, CheckStatus, StructureConstant};
use crate::scalar;

pub mod exit {
    pub const PASS: i32 = 0;
    pub const MATH_FAILURE: i32 = 1;
    pub const INPUT_ERROR: i32 = 2;
    pub const NILPOTENCY_FAILURE: i32 = 3;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapEntry {
    pub source: String,
    pub target: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedMap {
    pub name: String,
    pub entries: Vec<MapEntry>,
}

impl NamedMap {
    pub fn new(name: &str, map: &GradedMap) -> Self {
        let mut entries = map.entries();
        entries.sort();
        NamedMap {
            name: name.to_string(),
            entries: entries
                .into_iter()
                .map(|(s, t, c)| MapEntry {
                    source: map.source().label(s).to_string(),
                    target: map.target().label(t).to_string(),
                    coefficient: scalar::format(&c),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    pub witness: Option<Witness>,
    pub exit_code: i32,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        let (kind, witness) = match e {
            Error::SpaceMismatch(_) => ("space-mismatch", None),
            Error::DegreeMismatch(_) => ("degree-mismatch", None),
            Error::LengthMismatch { .. } => ("length-mismatch", None),
            Error::InvalidSpace(_) => ("invalid-space", None),
            Error::InvalidMap(_) => ("invalid-map", None),
            Error::PreconditionFailed { witness, .. } => ("precondition-failed", Some(witness)),
            Error::MorphismInvalid(w) => ("morphism-invalid", Some(w)),
            Error::NotLocallyNilpotent { witness, .. } => ("not-locally-nilpotent", Some(witness)),
            Error::NotAPerturbation(w) => ("not-a-perturbation", Some(w)),
            Error::HypothesisFailed { witness, .. } => ("hypothesis-failed", Some(witness)),
            Error::NotACodifferential(w) => ("not-a-codifferential", Some(w)),
            Error::DegreeError(_) => ("degree-error", None),
            Error::InternalAssertion(_) => ("internal-assertion", None),
            Error::Parse { .. } => ("parse", None),
            Error::Semantic(_) => ("semantic", None),
        };
        ErrorInfo {
            kind: kind.to_string(),
            message: e.to_string(),
            witness: witness.cloned(),
            exit_code: exit_code(e),
        }
    }
}

/// 2 for malformed or inconsistent input, 3 when a series does not terminate,
/// 1 for every other mathematical failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Semantic(_)
        | Error::SpaceMismatch(_)
        | Error::DegreeMismatch(_)
        | Error::LengthMismatch { .. }
        | Error::InvalidSpace(_)
        | Error::InvalidMap(_)
        | Error::DegreeError(_) => exit::INPUT_ERROR,
        Error::NotLocallyNilpotent { .. } => exit::NILPOTENCY_FAILURE,
        _ => exit::MATH_FAILURE,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub mode: Option<String>,
    pub status: Status,
    pub checks: Vec<CheckOutcome>,
    pub maps: Vec<NamedMap>,
    pub brackets: Vec<StructureConstant>,
    pub inclusion_family: Vec<StructureConstant>,
    pub notes: Vec<String>,
    pub error: Option<ErrorInfo>,
}

impl Report {
    pub fn new(command: &str, mode: Option<&str>) -> Self {
        Report {
            command: command.to_string(),
            mode: mode.map(str::to_string),
            status: Status::Pass,
            checks: Vec::new(),
            maps: Vec::new(),
            brackets: Vec::new(),
            inclusion_family: Vec::new(),
            notes: Vec::new(),
            error: None,
        }
    }

    /// Appends a check; a failed check turns the report into a failure.
    pub fn push_check(&mut self, outcome: CheckOutcome) {
        if outcome.status == CheckStatus::Failed && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.checks.push(outcome);
    }

    pub fn push_validation(&mut self, name: &str, report: ValidationReport) {
        self.push_check(CheckOutcome::from_report(name, report));
    }

    /// A check that is expected to fail, e.g. a demonstration of a counterexample.
    pub fn push_expected_failure(&mut self, name: &str, witness: Option<Witness>) {
        let status = if witness.is_some() {
            CheckStatus::Passed
        } else {
            CheckStatus::Failed
        };
        self.push_check(CheckOutcome {
            name: name.to_string(),
            status,
            witness,
        });
    }

    pub fn fail_with(&mut self, e: &Error) {
        self.status = Status::Error;
        self.error = Some(ErrorInfo::from(e));
    }

    pub fn exit_code(&self) -> i32 {
        match (&self.status, &self.error) {
            (Status::Pass, _) => exit::PASS,
            (_, Some(e)) => e.exit_code,
            _ => exit::MATH_FAILURE,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        match &self.mode {
            Some(m) => {
                let _ = writeln!(out, "{} ({m}): {status}", self.command);
            }
            None => {
                let _ = writeln!(out, "{}: {status}", self.command);
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "  {note}");
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
        }
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Passed => "ok",
                CheckStatus::Failed => "FAILED",
                CheckStatus::Reported => "reported",
            };
            let _ = writeln!(out, "  [{tag}] {}", c.name);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "      {w}");
            }
        }
        for m in &self.maps {
            let _ = writeln!(out, "{}:", m.name);
            if m.entries.is_empty() {
                let _ = writeln!(out, "  0");
            }
            for e in &m.entries {
                let _ = writeln!(out, "  {} → {} : {}", e.source, e.target, e.coefficient);
            }
        }
        write_constants(&mut out, "brackets", "l", &self.brackets);
        write_constants(&mut out, "inclusion family", "f", &self.inclusion_family);
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error [{}]: {}", e.kind, e.message);
        }
        out
    }
}

fn write_constants(out: &mut String, title: &str, symbol: &str, list: &[StructureConstant]) {
    if list.is_empty() {
        return;
    }
    let _ = writeln!(out, "{title}:");
    for s in list {
        let _ = writeln!(
            out,
            "  {symbol}{}({}) ∋ {} {}",
            s.arity,
            s.inputs.join(", "),
            s.coefficient,
            s.output
        );
    }
}
