use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Passes when `value <= tolerance`.
    Tolerance,
    /// A property that holds or not; `value` is 0 or 1.
    Property,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), kind: CheckKind::Tolerance, value, tolerance, passed: value <= tolerance }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            kind: CheckKind::Property,
            value: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: ok,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        match self.kind {
            CheckKind::Tolerance => write!(f, "{tag} {}: {:e} <= {:e}", self.name, self.value, self.tolerance),
            CheckKind::Property => write!(f, "{tag} {}", self.name),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CommandOutcome {
    pub code: u8,
    pub artifacts: Vec<PathBuf>,
    pub summary: Vec<String>,
}

impl CommandOutcome {
    pub(crate) fn from_checks(checks: &[Check], artifacts: Vec<PathBuf>) -> Self {
        let code = if checks.iter().all(|c| c.passed) { 0 } else { 1 };
        CommandOutcome { code, artifacts, summary: checks.iter().map(Check::to_string).collect() }
    }

    pub fn passed(&self) -> bool {
        self.code == 0
    }
}
