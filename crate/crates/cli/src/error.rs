use std::path::PathBuf;

use serde_json::json;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}:{line}: {reason}", path.display())]
    Input {
        path: PathBuf,
        line: u64,
        reason: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] nullprop_core::Error),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed report {}: {reason}", path.display())]
    Report { path: PathBuf, reason: String },

    #[error("replay of {} differs from the stored result", path.display())]
    ReplayMismatch { path: PathBuf },
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input { .. } => "input",
            CliError::Config(_) => "config",
            CliError::Core(_) => "domain",
            CliError::Io { .. } => "io",
            CliError::Report { .. } => "report",
            CliError::ReplayMismatch { .. } => "replay_mismatch",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::ReplayMismatch { .. } => 3,
            _ => 1,
        }
    }

    /// One-line JSON object for stderr.
    pub fn to_json(&self) -> String {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Input { path, line, .. } = self {
            body["path"] = json!(path);
            body["line"] = json!(line);
        }
        json!({ "error": body }).to_string()
    }
}
