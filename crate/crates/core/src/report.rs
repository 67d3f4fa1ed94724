//! Structured verification reports.
//!
//! Every verifier in the crate returns a [`VerificationReport`]: one
//! [`CheckResult`] per named condition, each carrying the worst residual
//! observed, the threshold it was compared against, and which element
//! attained it. Verifiers never fail early; they always scan everything and
//! report the worst case, so a failing report pinpoints the offender.

use std::fmt;

/// Outcome of a single named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    /// Human-readable name of the condition, e.g. `"cross-basis unbiasedness"`.
    pub label: String,
    /// Largest residual observed across all elements the check covers.
    pub worst_residual: f64,
    /// Threshold the residual was compared against.
    pub threshold: f64,
    /// Whether `worst_residual <= threshold`.
    pub pass: bool,
    /// Which element attained the worst residual, when the check covers more
    /// than a single aggregate quantity.
    pub worst_offender: Option<String>,
}

/// Results of all checks a verifier ran, with their conjunction.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    /// True iff every check passed.
    pub overall_pass: bool,
}

impl VerificationReport {
    /// Assembles a report; `overall_pass` is the conjunction of the checks.
    pub fn from_checks(checks: Vec<CheckResult>) -> Self {
        let overall_pass = checks.iter().all(|c| c.pass);
        VerificationReport { checks, overall_pass }
    }

    /// Looks up a check by label.
    pub fn check(&self, label: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.label == label)
    }

    /// Largest residual across all checks.
    pub fn worst_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.worst_residual).fold(0.0, f64::max)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.label.len()).max().unwrap_or(0).max(5);
        for check in &self.checks {
            write!(
                f,
                "{:<width$}  {:>12.5e}  <=  {:>9.3e}  {}",
                check.label,
                check.worst_residual,
                check.threshold,
                if check.pass { "pass" } else { "FAIL" },
            )?;
            if let Some(offender) = &check.worst_offender {
                write!(f, "  [worst: {offender}]")?;
            }
            writeln!(f)?;
        }
        write!(f, "overall: {}", if self.overall_pass { "PASS" } else { "FAIL" })
    }
}

/// Running maximum of residuals with lazy identification of the argmax.
///
/// Internal helper for the verifiers: `observe` keeps the offender closure
/// unevaluated unless the residual becomes the new worst.
pub(crate) struct WorstCase {
    residual: f64,
    offender: Option<String>,
}

impl WorstCase {
    pub(crate) fn new() -> Self {
        WorstCase { residual: 0.0, offender: None }
    }

    pub(crate) fn observe(&mut self, residual: f64, offender: impl FnOnce() -> String) {
        // A NaN residual means the candidate contains non-finite data; treat
        // it as infinitely bad so the check fails instead of being skipped by
        // a comparison involving NaN.
        let effective = if residual.is_nan() { f64::INFINITY } else { residual };
        if self.offender.is_none() || effective > self.residual {
            self.residual = effective;
            self.offender = Some(offender());
        }
    }

    pub(crate) fn into_check(self, label: &str, threshold: f64) -> CheckResult {
        CheckResult {
            label: label.to_string(),
            pass: self.residual <= threshold,
            worst_residual: self.residual,
            threshold,
            worst_offender: self.offender,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_passes_iff_all_checks_pass() {
        let mut w1 = WorstCase::new();
        w1.observe(1e-12, || "a".to_string());
        let mut w2 = WorstCase::new();
        w2.observe(1e-3, || "b".to_string());

        let passing = VerificationReport::from_checks(vec![
            w1.into_check("first", 1e-10),
        ]);
        assert!(passing.overall_pass);

        let failing = VerificationReport::from_checks(vec![
            passing.checks[0].clone(),
            w2.into_check("second", 1e-10),
        ]);
        assert!(!failing.overall_pass);
        assert!(failing.check("first").unwrap().pass);
        assert!(!failing.check("second").unwrap().pass);
        assert_eq!(failing.check("second").unwrap().worst_offender.as_deref(), Some("b"));
    }

    #[test]
    fn worst_case_tracks_the_argmax() {
        let mut w = WorstCase::new();
        w.observe(0.5, || "small".to_string());
        w.observe(2.0, || "big".to_string());
        w.observe(1.0, || "middle".to_string());
        let check = w.into_check("c", 1.0);
        assert_eq!(check.worst_residual, 2.0);
        assert_eq!(check.worst_offender.as_deref(), Some("big"));
        assert!(!check.pass);
    }

    #[test]
    fn empty_check_passes_with_zero_residual() {
        let check = WorstCase::new().into_check("vacuous", 1e-10);
        assert!(check.pass);
        assert_eq!(check.worst_residual, 0.0);
        assert!(check.worst_offender.is_none());
    }

    #[test]
    fn nan_residual_fails_the_check() {
        let mut w = WorstCase::new();
        w.observe(f64::NAN, || "bad".to_string());
        let check = w.into_check("c", 1.0);
        assert!(!check.pass);
    }

    #[test]
    fn nan_residual_after_finite_values_still_fails() {
        let mut w = WorstCase::new();
        w.observe(0.5, || "fine".to_string());
        w.observe(f64::NAN, || "bad".to_string());
        let check = w.into_check("c", 1.0);
        assert!(!check.pass);
        assert_eq!(check.worst_offender.as_deref(), Some("bad"));
    }
}
