//! Pass/fail reporting shared by every diagnostic.

use std::fmt;

/// Outcome of a single check. `Inconclusive` is reserved for checks limited
/// by grid refinement or unmet structural assumptions; it does not fail a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "pass"),
            CheckStatus::Fail => write!(f, "fail"),
            CheckStatus::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// One named check with its measured value and tolerance. `anchor` names the
/// mathematical property being certified (e.g. `entropy-inequality`).
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub anchor: &'static str,
    pub status: CheckStatus,
    pub value: f64,
    pub tolerance: f64,
    pub note: Option<String>,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        anchor: &'static str,
        pass: bool,
        value: f64,
        tolerance: f64,
    ) -> Self {
        Check {
            name: name.into(),
            anchor,
            status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
            value,
            tolerance,
            note: None,
        }
    }

    pub fn inconclusive(
        name: impl Into<String>,
        anchor: &'static str,
        value: f64,
        note: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            anchor,
            status: CheckStatus::Inconclusive,
            value,
            tolerance: f64::NAN,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Which boundary-relaxation regime a scenario sits in. Decided solely by the
/// declared integrability of the rate profile, never by measured magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Integrable,
    NonIntegrable,
    /// Integrable at one endpoint only.
    Mixed {
        left_integrable: bool,
    },
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Integrable => write!(f, "integrable"),
            Regime::NonIntegrable => write!(f, "non-integrable"),
            Regime::Mixed { left_integrable: true } => write!(f, "mixed(left integrable)"),
            Regime::Mixed { left_integrable: false } => write!(f, "mixed(right integrable)"),
        }
    }
}

/// Collection of checks produced by one diagnostic pass.
#[derive(Debug, Clone)]
pub struct DiagnosticsReport {
    pub regime: Regime,
    pub checks: Vec<Check>,
}

impl DiagnosticsReport {
    pub fn new(regime: Regime) -> Self {
        DiagnosticsReport { regime, checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: DiagnosticsReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    /// Deterministic order regardless of how checks were produced.
    pub fn sort_by_name(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    /// Human-readable multi-line summary.
    pub fn summary(&self) -> String {
        let mut s = format!("regime: {}\n", self.regime);
        for c in &self.checks {
            s.push_str(&format!(
                "[{}] {} ({}): value {:.6e}, tolerance {:.3e}{}\n",
                c.status,
                c.name,
                c.anchor,
                c.value,
                c.tolerance,
                c.note.as_deref().map(|n| format!(" — {n}")).unwrap_or_default()
            ));
        }
        let n_fail = self.failures().count();
        s.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            n_fail
        ));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_aggregates_status() {
        let mut r = DiagnosticsReport::new(Regime::NonIntegrable);
        r.push(Check::new("a", "x", true, 0.0, 1.0));
        assert!(r.all_passed());
        r.push(Check::inconclusive("b", "y", 0.5, "grid-limited"));
        assert!(r.all_passed());
        r.push(Check::new("c", "z", false, 2.0, 1.0));
        assert!(!r.all_passed());
        assert_eq!(r.failures().count(), 1);
        assert!(r.summary().contains("3 checks, 1 failed"));
    }
}
