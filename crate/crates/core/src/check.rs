//! Named pass/fail assertions collected into reports.

use serde::Serialize;

use crate::algebra::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    /// `lhs - rhs` when the assertion fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub difference: Option<Polynomial>,
}

pub fn assert_eq_poly(name: &str, lhs: &Polynomial, rhs: &Polynomial) -> Assertion {
    let diff = lhs - rhs;
    Assertion {
        name: name.to_string(),
        passed: diff.is_zero(),
        difference: (!diff.is_zero()).then_some(diff),
    }
}

impl Assertion {
    pub fn flag(name: impl Into<String>, passed: bool) -> Self {
        Assertion {
            name: name.into(),
            passed,
            difference: None,
        }
    }
}
