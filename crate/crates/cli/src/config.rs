//! Optional TOML configuration. Every key is optional; command-line flags
//! take precedence over the file, and the file over built-in defaults.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub mode: Option<String>,
    pub algorithm: Option<String>,
    pub rule: Option<String>,
    pub init: Option<String>,
    pub max_iters: Option<usize>,
    pub sigma: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub threads: Option<usize>,
    pub rescale: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// First present value among flag, file and default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
