//! Verification records: one checked inequality with its margin, a
//! conservative numerical uncertainty, and a three-state verdict.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Inconclusive,
    Violated,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationRecord {
    pub theorem_id: String,
    pub input: String,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs - rhs; the checked inequalities all read lhs >= rhs.
    pub margin: f64,
    /// Conservative bound on |numerical error of the margin|, already
    /// including the safety factor 3 on the Richardson estimate.
    pub uncertainty: f64,
    pub verdict: Verdict,
    /// Tolerance under which an equality case counts as holding.
    pub tolerance: f64,
    /// Set when the input is an exact split/ball equality case.
    pub note: Option<String>,
    pub intermediates: serde_json::Value,
    pub certificates: serde_json::Value,
    pub wall_ms: f64,
}

impl VerificationRecord {
    /// Three-state policy: holds only when the margin clears the
    /// uncertainty; known equality cases hold at |margin| <= tolerance.
    pub fn with_verdict(mut self, equality_case: bool) -> Self {
        self.margin = self.lhs - self.rhs;
        self.verdict = if self.lhs.is_infinite() && self.lhs > 0.0 {
            Verdict::Holds
        } else if equality_case && self.margin.abs() <= self.tolerance {
            Verdict::Holds
        } else if self.margin > self.uncertainty {
            Verdict::Holds
        } else if self.margin < -self.uncertainty {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        };
        self
    }

    pub fn blank(theorem_id: &str, input: String) -> Self {
        VerificationRecord {
            theorem_id: theorem_id.into(),
            input,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            uncertainty: 0.0,
            verdict: Verdict::Inconclusive,
            tolerance: 1e-8,
            note: None,
            intermediates: serde_json::json!({}),
            certificates: serde_json::json!({}),
            wall_ms: 0.0,
        }
    }
}
