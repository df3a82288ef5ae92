use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("sort error: {0}")]
    Sort(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("invalid theory: {0}")]
    Theory(String),

    #[error("normalization exceeded {steps} steps (last rule applied: {rule})")]
    NonTermination { steps: usize, rule: String },

    #[error("variant generation for `{term}` did not close within depth cap {depth}")]
    NotClosed { term: String, depth: usize },

    #[error("timed out")]
    Timeout,

    #[error("oracle budget exceeded: {candidates} candidate substitutions (limit {limit})")]
    OracleBudget { candidates: u128, limit: u128 },

    #[error("{0}")]
    Input(String),
}
