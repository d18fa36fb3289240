use thiserror::Error;

use crate::expr::ParseError;
use crate::sample::SampleError;

/// Problems with the input itself (exit code 2), as opposed to checks
/// that ran and failed.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("{location}: {source}")]
    Expression {
        location: String,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("unknown zoo entry `{0}`; run `solitonlab zoo` for the list")]
    UnknownZoo(String),
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),
    #[error("cannot {action} {path}: {message}")]
    Io { action: &'static str, path: String, message: String },
    #[error("{path}:{line}:{column}: {message}")]
    Json { path: String, line: usize, column: usize, message: String },
    #[error("zoo entry `{name}` failed self-validation: {diagnostics}")]
    SelfValidation { name: String, diagnostics: String },
}
