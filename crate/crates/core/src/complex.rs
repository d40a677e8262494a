//! Differential graded modules, validation reports and witnesses.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::map::GradedMap;
use crate::space::{same_space, Basis, SpaceRef};
use crate::vector::Vector;

/// A concrete input together with the offending value, both rendered with the
/// labels of their spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub input: String,
    pub value: String,
}

impl Witness {
    pub fn new(input: impl Into<String>, value: impl Into<String>) -> Self {
        Witness {
            input: input.into(),
            value: value.into(),
        }
    }

    pub fn basis(source: &SpaceRef, b: Basis, target: &SpaceRef, value: &Vector) -> Self {
        Witness::new(source.label(b), target.render(value))
    }

    pub fn vector(source: &SpaceRef, v: &Vector, target: &SpaceRef, value: &Vector) -> Self {
        Witness::new(source.render(v), target.render(value))
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "on {} got {}", self.input, self.value)
    }
}

/// `Ok(())` when a property holds, otherwise a witness of its failure.
pub type Verdict = std::result::Result<(), Witness>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub witness: Witness,
}

/// Outcome of a validation: empty iff every check passed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, check: impl Into<String>, witness: Witness) {
        self.violations.push(Violation {
            check: check.into(),
            witness,
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn mentions(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }

    /// Compares two maps columnwise and records the first difference under `check`.
    pub fn expect_equal(&mut self, check: &str, lhs: &GradedMap, rhs: &GradedMap) {
        if let Some((b, x, y)) = lhs.difference_witness(rhs) {
            let diff = &x - &y;
            self.push(check, Witness::basis(lhs.source(), b, lhs.target(), &diff));
        }
    }

    pub fn expect_zero(&mut self, check: &str, map: &GradedMap) {
        if let Some((b, v)) = map.nonzero_witness() {
            self.push(check, Witness::basis(map.source(), b, map.target(), &v));
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{}: {}", v.check, v.witness)?;
        }
        Ok(())
    }
}

/// A graded space with a degree +1 endomorphism. Construction checks shape only;
/// use [`check_complex`] for `d² = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DGModule {
    pub space: SpaceRef,
    pub differential: GradedMap,
}

impl DGModule {
    pub fn new(space: &SpaceRef, differential: GradedMap) -> Result<Self> {
        if differential.degree() != 1 {
            return Err(Error::DegreeMismatch(format!(
                "differential has degree {}, expected +1",
                differential.degree()
            )));
        }
        if !same_space(differential.source(), space) || !same_space(differential.target(), space) {
            return Err(Error::SpaceMismatch("differential is not an endomorphism of the space".into()));
        }
        let differential = differential.with_spaces(space, space)?;
        Ok(DGModule {
            space: space.clone(),
            differential,
        })
    }

    /// The space with zero differential.
    pub fn trivial(space: &SpaceRef) -> Self {
        DGModule {
            space: space.clone(),
            differential: GradedMap::zero(space, space, 1),
        }
    }

    /// Same module; `true` when the two share space and differential.
    pub fn same_as(&self, other: &DGModule) -> bool {
        same_space(&self.space, &other.space) && self.differential == other.differential
    }
}

/// Lists every basis vector `v` with `d(d(v)) != 0`.
pub fn check_complex(m: &DGModule) -> ValidationReport {
    let mut report = ValidationReport::default();
    let d = &m.differential;
    for b in m.space.basis() {
        let dd = d.apply(&d.image(b));
        if !dd.is_zero() {
            report.push("d^2 = 0", Witness::basis(&m.space, b, &m.space, &dd));
        }
    }
    report
}

/// Checks that `f: M -> N` (degree 0) commutes with the differentials.
pub fn check_chain_map(check: &str, f: &GradedMap, from: &DGModule, to: &DGModule) -> ValidationReport {
    let mut report = ValidationReport::default();
    match (to.differential.compose(f), f.compose(&from.differential)) {
        (Ok(lhs), Ok(rhs)) => report.expect_equal(check, &lhs, &rhs),
        _ => report.push(check, Witness::new("spaces", "map does not connect the modules")),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::space::GradedSpace;

    #[test]
    fn zero_differential_passes() {
        let n = GradedSpace::from_labels(&[(0, &["x"]), (1, &["y"])]).unwrap();
        assert!(check_complex(&DGModule::trivial(&n)).is_ok());
    }

    #[test]
    fn two_term_complex_passes() {
        let n = GradedSpace::from_labels(&[(0, &["x"]), (1, &["y"])]).unwrap();
        let d = GradedMap::from_entries(&n, &n, 1, [(Basis::new(0, 0), Basis::new(1, 0), int(1))])
            .unwrap();
        assert!(check_complex(&DGModule::new(&n, d).unwrap()).is_ok());
    }

    #[test]
    fn failure_names_the_source() {
        let n = GradedSpace::from_labels(&[(0, &["x"]), (1, &["y"]), (2, &["z"])]).unwrap();
        let d = GradedMap::from_entries(
            &n,
            &n,
            1,
            [
                (Basis::new(0, 0), Basis::new(1, 0), int(1)),
                (Basis::new(1, 0), Basis::new(2, 0), int(1)),
            ],
        )
        .unwrap();
        let report = check_complex(&DGModule::new(&n, d).unwrap());
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].witness.input, "x");
        assert_eq!(report.violations[0].witness.value, "1 z");
    }

    #[test]
    fn rejects_wrong_degree() {
        let n = GradedSpace::from_labels(&[(0, &["x"])]).unwrap();
        assert!(DGModule::new(&n, GradedMap::identity(&n)).is_err());
    }
}
