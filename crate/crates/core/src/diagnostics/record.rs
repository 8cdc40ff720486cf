use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One line of a check report. `margin` is `rhs − lhs` for inequalities
/// `lhs ≤ rhs`, and `tolerance − |error|` for equalities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_name: String,
    pub inputs: Value,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// Inequality `lhs ≤ rhs`.
    pub fn at_most(name: impl Into<String>, inputs: Value, lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            check_name: name.into(),
            inputs,
            lhs,
            rhs,
            margin,
            pass: margin >= 0.0,
        }
    }

    /// `|lhs − rhs| ≤ tol`.
    pub fn close(name: impl Into<String>, inputs: Value, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = tol - (lhs - rhs).abs();
        Self {
            check_name: name.into(),
            inputs,
            lhs,
            rhs,
            margin,
            pass: margin >= 0.0,
        }
    }

    /// Boolean outcome with no natural numeric sides.
    pub fn flag(name: impl Into<String>, inputs: Value, pass: bool) -> Self {
        let v = if pass { 1.0 } else { 0.0 };
        Self {
            check_name: name.into(),
            inputs,
            lhs: v,
            rhs: 1.0,
            margin: v - 1.0,
            pass,
        }
    }
}
