//! The stored golden expressions.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use qhj_opalg::{parse_cnumber, parse_operator, CNumberExpr, OperatorExpr};

use crate::error::DeriveError;

/// Verbatim contents of `goldens/goldens.txt`.
pub const GOLDENS_TEXT: &str = include_str!("../goldens/goldens.txt");

/// Label-to-text map of golden expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goldens {
    entries: BTreeMap<String, String>,
}

impl Goldens {
    /// Parse `label = expression` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, DeriveError> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((label, expr)) = line.split_once(" = ") else {
                return Err(DeriveError::GoldenFormat {
                    line: n + 1,
                    reason: "expected `label = expression`".into(),
                });
            };
            if entries.insert(label.trim().to_string(), expr.trim().to_string()).is_some() {
                return Err(DeriveError::GoldenFormat {
                    line: n + 1,
                    reason: format!("duplicate label `{}`", label.trim()),
                });
            }
        }
        Ok(Goldens { entries })
    }

    /// The goldens compiled into this crate.
    pub fn embedded() -> &'static Goldens {
        static CELL: OnceLock<Goldens> = OnceLock::new();
        CELL.get_or_init(|| Goldens::parse(GOLDENS_TEXT).expect("embedded golden file is well formed"))
    }

    pub fn text(&self, label: &str) -> Result<&str, DeriveError> {
        self.entries
            .get(label)
            .map(String::as_str)
            .ok_or_else(|| DeriveError::MissingGolden(label.to_string()))
    }

    pub fn cnumber(&self, label: &str) -> Result<CNumberExpr, DeriveError> {
        parse_cnumber(self.text(label)?).map_err(|source| DeriveError::GoldenSyntax {
            label: label.to_string(),
            source,
        })
    }

    pub fn operator(&self, label: &str) -> Result<OperatorExpr, DeriveError> {
        parse_operator(self.text(label)?).map_err(|source| DeriveError::GoldenSyntax {
            label: label.to_string(),
            source,
        })
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}
