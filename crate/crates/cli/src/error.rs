use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Core(#[from] hecke_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;
