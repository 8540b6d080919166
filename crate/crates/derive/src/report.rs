use std::fmt::Write as _;

use qhj_opalg::{CNumberExpr, OperatorExpr};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Match,
    Mismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExprKind {
    Operator,
    CNumber,
}

/// One produced expression compared against one golden.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationStep {
    pub name: String,
    pub golden_label: String,
    pub kind: ExprKind,
    pub produced: String,
    pub golden: String,
    pub status: StepStatus,
    /// `produced - golden` in canonical form, present on mismatch.
    pub diff: Option<String>,
    pub note: Option<String>,
}

impl DerivationStep {
    pub(crate) fn cnumber(
        name: &str,
        label: &str,
        produced: &CNumberExpr,
        golden_text: &str,
        golden: &CNumberExpr,
    ) -> Self {
        let equal = qhj_opalg::expr_equal(produced, golden);
        DerivationStep {
            name: name.to_string(),
            golden_label: label.to_string(),
            kind: ExprKind::CNumber,
            produced: produced.to_string(),
            golden: golden_text.to_string(),
            status: if equal { StepStatus::Match } else { StepStatus::Mismatch },
            diff: (!equal).then(|| (produced - golden).to_string()),
            note: None,
        }
    }

    pub(crate) fn operator(
        name: &str,
        label: &str,
        produced: &OperatorExpr,
        golden_text: &str,
        golden: &OperatorExpr,
    ) -> Self {
        let equal = qhj_opalg::operator_equal(produced, golden);
        DerivationStep {
            name: name.to_string(),
            golden_label: label.to_string(),
            kind: ExprKind::Operator,
            produced: produced.to_string(),
            golden: golden_text.to_string(),
            status: if equal { StepStatus::Match } else { StepStatus::Mismatch },
            diff: (!equal).then(|| (produced - golden).to_string()),
            note: None,
        }
    }

    pub(crate) fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    pub fn matched(&self) -> bool {
        self.status == StepStatus::Match
    }
}

/// A named yes/no property of the derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of identifying the relativistic scalar coefficient `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CIdentification {
    /// The value as printed alongside the Klein-Gordon comparison.
    pub printed: String,
    /// Solved from the mechanically reduced real part.
    pub solved: String,
    /// Solved from the printed real part instead.
    pub solved_from_printed_real: String,
    pub solved_is_local: bool,
    pub solved_reproduces_kg_final: bool,
    pub printed_reproduces_kg_final: bool,
    pub printed_reproduces_kg_final_from_printed_real: bool,
    pub resolution: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationReport {
    pub pipeline: String,
    pub pass: bool,
    /// Gating comparisons: every one must match for the report to pass.
    pub steps: Vec<DerivationStep>,
    /// Comparisons against alternative printed forms; recorded, never gating.
    pub audits: Vec<DerivationStep>,
    pub checks: Vec<Check>,
    pub c_identification: Option<CIdentification>,
    pub notes: Vec<String>,
}

impl DerivationReport {
    pub(crate) fn new(pipeline: &str) -> Self {
        DerivationReport {
            pipeline: pipeline.to_string(),
            pass: false,
            steps: Vec::new(),
            audits: Vec::new(),
            checks: Vec::new(),
            c_identification: None,
            notes: Vec::new(),
        }
    }

    pub(crate) fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub(crate) fn finish(mut self) -> Self {
        let c_ok = self
            .c_identification
            .as_ref()
            .is_none_or(|c| c.solved_is_local && c.solved_reproduces_kg_final && !c.resolution.is_empty());
        self.pass = self.steps.iter().all(DerivationStep::matched) && self.checks.iter().all(|c| c.passed) && c_ok;
        self
    }

    pub fn failing_steps(&self) -> impl Iterator<Item = &DerivationStep> {
        self.steps.iter().filter(|s| !s.matched())
    }

    pub fn step(&self, name: &str) -> Option<&DerivationStep> {
        self.steps.iter().chain(&self.audits).find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable derivation transcript.
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "pipeline {}: {verdict}", self.pipeline);
        let section = |title: &str, steps: &[DerivationStep], out: &mut String| {
            if steps.is_empty() {
                return;
            }
            let _ = writeln!(out, "\n{title}");
            for s in steps {
                let tag = if s.matched() { "match" } else { "mismatch" };
                let _ = writeln!(out, "  [{tag}] {} ({})", s.name, s.golden_label);
                let _ = writeln!(out, "    produced: {}", s.produced);
                let _ = writeln!(out, "    golden:   {}", s.golden);
                if let Some(d) = &s.diff {
                    let _ = writeln!(out, "    diff:     {d}");
                }
                if let Some(n) = &s.note {
                    let _ = writeln!(out, "    note:     {n}");
                }
            }
        };
        section("steps", &self.steps, &mut out);
        section("audits (not gating)", &self.audits, &mut out);
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\nchecks");
            for c in &self.checks {
                let tag = if c.passed { "pass" } else { "fail" };
                let _ = writeln!(out, "  [{tag}] {}: {}", c.name, c.detail);
            }
        }
        if let Some(c) = &self.c_identification {
            let _ = writeln!(out, "\nc identification");
            let _ = writeln!(out, "  printed:                  {}", c.printed);
            let _ = writeln!(out, "  solved:                   {}", c.solved);
            let _ = writeln!(out, "  solved from printed real: {}", c.solved_from_printed_real);
            let _ = writeln!(out, "  resolution: {}", c.resolution);
        }
        if !self.notes.is_empty() {
            let _ = writeln!(out, "\nnotes");
            for n in &self.notes {
                let _ = writeln!(out, "  - {n}");
            }
        }
        out
    }
}
