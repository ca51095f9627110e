//! The JSON report every command writes to standard output.

use bessel_core::check::Check;
use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub deviation: f64,
}

impl From<&Check> for CheckRecord {
    fn from(c: &Check) -> Self {
        CheckRecord {
            name: c.name.clone(),
            passed: c.passed,
            lhs: c.lhs,
            rhs: c.rhs,
            tolerance: c.tolerance,
            deviation: c.deviation,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    pub parameters: Value,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub results: Value,
}

impl Report {
    pub fn new(command: &str, seed: Option<u64>, parameters: Value, checks: &[Check], results: Value) -> Self {
        let records: Vec<CheckRecord> = checks.iter().map(CheckRecord::from).collect();
        let passed = records.iter().filter(|c| c.passed).count();
        Report {
            command: command.to_string(),
            version: VERSION.to_string(),
            seed,
            parameters,
            summary: Summary { total: records.len(), passed, failed: records.len() - passed },
            checks: records,
            results,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only plain data")
    }
}

/// Prefixes every check name with `label: `.
pub fn labelled(label: &str, checks: impl IntoIterator<Item = Check>) -> Vec<Check> {
    checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("{label}: {}", c.name);
            c
        })
        .collect()
}

/// The check closest to failing, renamed to say how many it stands for.
/// Passes only if every check in the group passes.
pub fn worst_of(name: &str, checks: &[Check]) -> Option<Check> {
    let ratio = |c: &Check| if c.tolerance > 0.0 { c.deviation / c.tolerance } else { c.deviation };
    let all = checks.iter().all(|c| c.passed);
    let worst = checks.iter().max_by(|a, b| a.passed.cmp(&b.passed).reverse().then(ratio(a).total_cmp(&ratio(b))))?;
    let mut out = worst.clone();
    out.name = format!("{name} (worst of {})", checks.len());
    out.passed = all;
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts() {
        let checks = [Check::residual("a", 0.0, 1e-9), Check::residual("b", 1.0, 1e-9)];
        let r = Report::new("t", Some(1), Value::Null, &checks, Value::Null);
        assert_eq!(r.summary, Summary { total: 2, passed: 1, failed: 1 });
        assert!(!r.all_passed());
    }

    #[test]
    fn worst_prefers_failures_then_largest_ratio() {
        let checks =
            [Check::residual("a", 1e-12, 1e-9), Check::residual("b", 5e-10, 1e-9), Check::residual("c", 1e-11, 1e-9)];
        let w = worst_of("g", &checks).unwrap();
        assert_eq!(w.lhs, 5e-10);
        assert!(w.passed);
        let mixed = [Check::residual("a", 1e-3, 1e-9), Check::residual("b", 1e-2, 1.0)];
        let w = worst_of("g", &mixed).unwrap();
        assert_eq!(w.lhs, 1e-3);
        assert!(!w.passed);
        assert!(worst_of("g", &[]).is_none());
    }
}
