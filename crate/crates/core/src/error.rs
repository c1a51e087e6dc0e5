use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("degenerate cell: {0}")]
    DegenerateCell(String),

    #[error("block index {index} out of range (blocks = {n_blocks})")]
    IndexOutOfRange { index: usize, n_blocks: usize },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("block {0} is not recoverable from the surviving disks")]
    NotRecoverable(usize),

    #[error("invalid failure count {f} for {n_disks} disks")]
    InvalidFailureCount { f: usize, n_disks: usize },

    #[error("invalid k-out-of-n structure: k = {k}, n = {n}")]
    InvalidKooN { k: usize, n: usize },

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("invalid probability {0}")]
    InvalidProbability(f64),

    #[error("invalid time: {0}")]
    InvalidTime(String),

    #[error("invalid failure rate {0}")]
    InvalidRate(f64),

    #[error("trial count must be at least 1")]
    InvalidTrials,

    #[error("{n_disks} disks exceeds the exact-enumeration limit of {limit}; use Monte Carlo")]
    TooLargeForExact { n_disks: usize, limit: usize },
}

impl Error {
    /// Capacity guards, as opposed to bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::TooLargeForExact { .. })
    }
}
