use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{Check, CliError};

/// Common wrapper of every JSON artifact; `payload` fields are inlined.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, P: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: &'a C,
    pub pass: bool,
    pub checks: &'a [Check],
    #[serde(flatten)]
    pub payload: P,
}

impl<'a, C: Serialize, P: Serialize> Envelope<'a, C, P> {
    pub fn new(command: &'static str, config: &'a C, checks: &'a [Check], payload: P) -> Self {
        Envelope {
            tool: "qhj",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            pass: checks.iter().all(|c| c.passed),
            checks,
            payload,
        }
    }
}

pub struct OutDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(CliError::io(root))?;
        Ok(OutDir { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn write(&mut self, rel: impl AsRef<Path>, text: &str) -> Result<(), CliError> {
        let path = self.root.join(rel);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        }
        fs::write(&path, text).map_err(CliError::io(&path))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, rel: impl AsRef<Path>, value: &T) -> Result<(), CliError> {
        let text = qhj_fields::export::to_json(value).map_err(|e| CliError::Config(e.to_string()))?;
        self.write(rel, &text)
    }

    pub fn into_paths(self) -> Vec<PathBuf> {
        self.written
    }
}
