use thiserror::Error;

/// Errors raised by constructors and operations across the toolkit.
///
/// Check failures are not errors: they are returned as data inside a
/// [`crate::report::Report`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: wrong table dimensions, duplicate identifiers,
    /// out-of-range indices, sets of the wrong width.
    #[error("structural error: {0}")]
    Structural(String),

    /// An enumeration or table would exceed a configured bound.
    #[error("resource bound exceeded: {what} needs {needed}, limit is {limit}")]
    Resource {
        what: String,
        needed: u128,
        limit: u128,
    },

    /// A caller broke an operation's precondition (for example a non-closed
    /// stack set passed where a closed one is required).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A closed term could not be evaluated.
    #[error("evaluation error: {0}")]
    Eval(String),

    /// A quadruple failed one of the properness clauses.
    #[error("improper quadruple: {0}")]
    Improper(String),

    /// Surface syntax error with a 1-based line/column position.
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// Kind mismatch in a higher-order expression.
    #[error("kind error: {0}")]
    Kind(String),

    /// A derivation applies a rule incorrectly.
    #[error("derivation error at {node}: {msg}")]
    Derivation { node: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, needed: u128, limit: u128) -> Self {
        Error::Resource {
            what: what.into(),
            needed,
            limit,
        }
    }
}
