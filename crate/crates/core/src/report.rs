//! Structured pass/fail records for theorem predicates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesesNotMet,
}

/// One verified predicate: named residuals against named tolerances, plus
/// optional serialized witnesses. A `pass` verdict means every residual
/// that has a matching tolerance entry is within it; residuals without a
/// tolerance are informational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub verdict: Verdict,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub witnesses: BTreeMap<String, serde_json::Value>,
    pub seed: u64,
}

impl VerificationReport {
    pub fn builder(theorem_id: impl Into<String>) -> ReportBuilder {
        ReportBuilder {
            theorem_id: theorem_id.into(),
            residuals: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            seed: 0,
            hypotheses_met: true,
            forced_fail: false,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub struct ReportBuilder {
    theorem_id: String,
    residuals: BTreeMap<String, f64>,
    tolerances: BTreeMap<String, f64>,
    witnesses: BTreeMap<String, serde_json::Value>,
    seed: u64,
    hypotheses_met: bool,
    forced_fail: bool,
}

impl ReportBuilder {
    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// A residual that must stay within `tol` for the verdict to pass.
    pub fn check(mut self, name: &str, residual: f64, tol: f64) -> Self {
        self.residuals.insert(name.to_string(), residual);
        self.tolerances.insert(name.to_string(), tol);
        self
    }

    /// A boolean predicate recorded as residual 0 (holds) / 1 (fails).
    pub fn check_flag(self, name: &str, holds: bool) -> Self {
        self.check(name, if holds { 0.0 } else { 1.0 }, 0.5)
    }

    /// Informational value, not gated.
    pub fn info(mut self, name: &str, value: f64) -> Self {
        self.residuals.insert(name.to_string(), value);
        self
    }

    pub fn witness(mut self, name: &str, value: serde_json::Value) -> Self {
        self.witnesses.insert(name.to_string(), value);
        self
    }

    /// Mark the instance as not satisfying the theorem hypotheses; the
    /// verdict becomes `hypotheses-not-met` regardless of the checks.
    pub fn hypotheses_not_met(mut self) -> Self {
        self.hypotheses_met = false;
        self
    }

    /// Force a fail verdict (for refutations that carry no residual).
    pub fn fail(mut self) -> Self {
        self.forced_fail = true;
        self
    }

    pub fn finish(self) -> VerificationReport {
        let verdict = if !self.hypotheses_met {
            Verdict::HypothesesNotMet
        } else if self.forced_fail
            || self
                .tolerances
                .iter()
                .any(|(name, &tol)| self.residuals.get(name).is_none_or(|&r| r > tol))
        {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        VerificationReport {
            theorem_id: self.theorem_id,
            verdict,
            residuals: self.residuals,
            tolerances: self.tolerances,
            witnesses: self.witnesses,
            seed: self.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_checks() {
        let ok = VerificationReport::builder("t").check("r", 1e-10, 1e-9).finish();
        assert_eq!(ok.verdict, Verdict::Pass);
        let bad = VerificationReport::builder("t").check("r", 1e-8, 1e-9).finish();
        assert_eq!(bad.verdict, Verdict::Fail);
        let skipped = VerificationReport::builder("t")
            .check("r", 1.0, 1e-9)
            .hypotheses_not_met()
            .finish();
        assert_eq!(skipped.verdict, Verdict::HypothesesNotMet);
    }

    #[test]
    fn info_values_do_not_gate() {
        let r = VerificationReport::builder("t")
            .info("bound", 123.0)
            .check("res", 0.0, 1.0)
            .finish();
        assert!(r.passed());
    }
}
