//! Driver behind the `qshi-teleport` binary.

pub mod config;
pub mod run;
pub mod selfcheck;
pub mod sweep;

use std::fmt;
use std::path::{Path, PathBuf};

pub use config::{load_config, parse_config, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Parse(config::ParseError),
    Validation(String),
    /// A ring produced an all-zero two-particle state.
    Degenerate {
        ring: &'static str,
        detail: String,
    },
    Io(String),
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Degenerate { .. } => 4,
            CliError::Io(_) | CliError::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "parse error: {e}"),
            CliError::Validation(e) => write!(f, "invalid config: {e}"),
            CliError::Degenerate { ring, detail } => write!(f, "{ring} is degenerate: {detail}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Other(e) => write!(f, "error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

/// `<out_dir>/<config stem>_<suffix>`.
pub fn output_path(out_dir: &Path, config: &Path, suffix: &str) -> PathBuf {
    let stem = config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "config".into());
    out_dir.join(format!("{stem}_{suffix}"))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
