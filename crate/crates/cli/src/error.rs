use thiserror::Error;

/// Input errors; all of them exit with code 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message} (at `{token}`)")]
    Parse { path: String, line: usize, column: usize, token: String, message: String },

    #[error("{entity}: {message}")]
    Semantic { entity: String, message: String },

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("invalid flag: {0}")]
    Flag(String),
}
