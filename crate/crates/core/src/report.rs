//! Structured check reports: machine (JSON) and human (text) rendering.

use serde::{Deserialize, Serialize};

/// The fixed curvature pairing used everywhere; recorded in every report so
/// downstream consumers can detect convention drift.
pub const CONVENTION: &str = "R4(X,Y,Z,W)=g(R(X,Y)W,Z); S(Y,Z)=sum_a g(R(e_a,Y)Z,e_a)";

/// One verified identity: a named residual against a tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(deserialize_with = "null_as_inf")]
    pub residual: f64,
    /// Infinite for purely informational checks; JSON renders that as null.
    #[serde(deserialize_with = "null_as_inf")]
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

/// JSON has no infinity literal; serde_json emits null for non-finite floats.
fn null_as_inf<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            residual,
            tolerance,
            passed: residual.is_finite() && residual <= tolerance,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }

    /// A check that did not run; counts as passed but carries the reason.
    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            residual: 0.0,
            tolerance: 0.0,
            passed: true,
            note: Some(format!("skipped: {}", reason.into())),
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(&self.note, Some(n) if n.starts_with("skipped:"))
    }
}

/// Full report for one manifold run. Field order is the serialization order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub manifold: String,
    pub seed: u64,
    pub convention: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(manifold: impl Into<String>, seed: u64, checks: Vec<Check>) -> Report {
        let passed = checks.iter().all(|c| c.passed);
        Report {
            manifold: manifold.into(),
            seed,
            convention: CONVENTION.to_string(),
            passed,
            checks,
        }
    }

    pub fn from_json(text: &str) -> crate::error::Result<Report> {
        serde_json::from_str(text)
            .map_err(|e| crate::error::CoreError::Invariant(format!("bad report JSON: {e}")))
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("manifold: {}\n", self.manifold));
        out.push_str(&format!("seed: {}\n", self.seed));
        out.push_str(&format!("convention: {}\n", self.convention));
        for c in &self.checks {
            let status = if c.is_skipped() {
                "SKIP"
            } else if c.passed {
                "PASS"
            } else {
                "FAIL"
            };
            out.push_str(&format!(
                "[{status}] {:<44} residual {:.16e}  tol {:.16e}",
                c.name, c.residual, c.tolerance
            ));
            if let Some(n) = &c.note {
                out.push_str(&format!("  ({n})"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}
