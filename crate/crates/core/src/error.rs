use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed user input: bad permutation, unknown group name, parse failure.
    #[error("input error: {0}")]
    Input(String),
    /// A computation was asked for a group beyond the configured element cap.
    #[error("size error: group order {order} exceeds element cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
    /// An internal invariant that must hold by construction failed; a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
    /// A resource budget (search nodes, component count) was exhausted.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// No usable prime was found for the modular character table computation.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
