//! One-sided inequality checks shared by the spectral, cut-norm and lemma
//! reports.

use serde::{Deserialize, Serialize};

use crate::numeric::inequality_slack;

/// `lhs <= rhs`, passing when `lhs <= rhs + 1e-10 * max(1, |rhs|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; negative means the inequality is violated.
    pub margin: f64,
    pub pass: bool,
}

impl InequalityCheck {
    pub fn le(id: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let pass = lhs.is_finite() && rhs.is_finite() && lhs <= rhs + inequality_slack(rhs);
        InequalityCheck {
            id: id.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            pass,
        }
    }
}

pub fn all_pass(checks: &[InequalityCheck]) -> bool {
    checks.iter().all(|c| c.pass)
}

/// Smallest margin, or `+inf` for an empty list.
pub fn worst_margin(checks: &[InequalityCheck]) -> f64 {
    checks.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_is_relative() {
        assert!(InequalityCheck::le("x", 1.0 + 5e-11, 1.0).pass);
        assert!(!InequalityCheck::le("x", 1.0 + 5e-10, 1.0).pass);
        assert!(InequalityCheck::le("x", 1000.0 + 5e-8, 1000.0).pass);
        let c = InequalityCheck::le("y", 1.0, 2.0);
        assert!(c.pass && c.margin == 1.0);
    }
}
