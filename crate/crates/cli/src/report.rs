//! Pass/fail checks, artifacts and the printed run summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use bhclock_core::table::{fmt_f64, Table};

/// One tolerance comparison. `NaN` values always fail.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, upper: f64) -> Self {
        Self {
            name: name.into(),
            value,
            lower: None,
            upper: Some(upper),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, lower: f64) -> Self {
        Self {
            name: name.into(),
            value,
            lower: Some(lower),
            upper: None,
        }
    }

    pub fn within(name: impl Into<String>, value: f64, lower: f64, upper: f64) -> Self {
        Self {
            name: name.into(),
            value,
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    /// Exact match of two counts.
    pub fn equals(name: impl Into<String>, value: usize, expected: usize) -> Self {
        Self::within(name, value as f64, expected as f64, expected as f64)
    }

    pub fn pass(&self) -> bool {
        !self.value.is_nan()
            && self.lower.is_none_or(|l| self.value >= l)
            && self.upper.is_none_or(|u| self.value <= u)
    }
}

pub fn checks_table(checks: &[Check]) -> Table {
    let bound = |b: Option<f64>| b.map(fmt_f64).unwrap_or_default();
    let mut t = Table::new(["check", "value", "lower", "upper", "pass"]);
    for c in checks {
        t.push(vec![
            c.name.clone(),
            fmt_f64(c.value),
            bound(c.lower),
            bound(c.upper),
            c.pass().to_string(),
        ]);
    }
    t
}

/// A named file body, written under the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(name: impl Into<String>, contents: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            contents: contents.into(),
        }
    }
}

/// What a command produced before anything touches the filesystem.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub wall_time: Duration,
    pub checks: Vec<Check>,
    pub artifacts: Vec<PathBuf>,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        let _ = writeln!(s, "wall time: {:.3} s", self.wall_time.as_secs_f64());
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let verdict = if c.pass() { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "  {verdict}  {:<width$}  {:.6e}", c.name, c.value);
        }
        for a in &self.artifacts {
            let _ = writeln!(s, "wrote {}", a.display());
        }
        s
    }
}

/// Writes every artifact plus `checks.csv` in order and returns their paths.
pub fn write_outcome(dir: &Path, outcome: &Outcome) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let checks = Artifact::new("checks.csv", checks_table(&outcome.checks).to_csv());
    let mut paths = Vec::new();
    for a in outcome.artifacts.iter().chain(std::iter::once(&checks)) {
        let p = dir.join(&a.name);
        std::fs::write(&p, &a.contents)?;
        paths.push(p);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_bounds() {
        assert!(Check::at_most("a", 1.0, 1.0).pass());
        assert!(!Check::at_most("a", f64::NAN, 1.0).pass());
        assert!(!Check::at_least("b", 0.5, 0.99).pass());
        assert!(Check::within("c", 0.5, 0.4, 0.6).pass());
        assert!(!Check::equals("d", 3, 2).pass());
    }

    #[test]
    fn checks_csv_layout() {
        let csv = checks_table(&[Check::at_most("x", 0.5, 1.0)]).to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("check,value,lower,upper,pass"));
        assert_eq!(
            lines.next(),
            Some("x,5.0000000000000000e-1,,1.0000000000000000e0,true")
        );
    }
}
