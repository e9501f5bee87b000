use alloc::string::String;

/// Errors raised by the beta-shift routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A digit tail that is not the expansion of 1 for any base.
    #[error("invalid expansion: {0}")]
    InvalidExpansion(String),
    /// An argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Orbit arithmetic could not certify the next digit.
    #[error("precision exhausted: only {reliable} digits are reliable")]
    Precision { reliable: usize },
    /// A comparison against the quasi-expansion needs digits beyond the known depth.
    #[error("undecided: comparison needs digits beyond truncation depth {depth}")]
    Undecided { depth: usize },
    /// A size guard was exceeded.
    #[error("size guard exceeded: {what} = {value} > {limit}")]
    Guard {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    /// The word is not admissible for this base.
    #[error("word is not admissible")]
    Inadmissible,
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
    /// Linear solve or iteration failure.
    #[error("solver error: {0}")]
    Solver(String),
    /// A value that the construction guarantees was violated.
    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;
