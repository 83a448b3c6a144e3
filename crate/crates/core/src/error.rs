use thiserror::Error;

/// Errors shared by all library modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("p/q = {p}/{q} is not in lowest terms")]
    NotCoprime { p: u64, q: u64 },

    #[error("pair ({p}, {q}) violates 0 <= p <= q, q >= 1")]
    InvalidPair { p: u64, q: u64 },

    #[error("partial quotient at index {index} is zero")]
    ZeroDigit { index: usize },

    #[error("64-bit overflow in continuant recurrence at index {index}")]
    Overflow { index: usize },

    #[error("bound {bound} must be at least 1")]
    InvalidBound { bound: u64 },

    #[error("limit {limit} outside supported range 1..=2^62")]
    InvalidLimit { limit: u64 },

    #[error("bitset of {requested} bits exceeds the configured budget of {budget} bits")]
    BitsetBudget { requested: u64, budget: u64 },

    #[error("bitset needs {expected} words, got {actual}")]
    WordCountMismatch { expected: usize, actual: usize },

    #[error("set bit at index {index} outside the valid range [1, limit]")]
    OutOfRangeBit { index: u64 },

    #[error("{count} cylinders at depth {depth} exceed the budget of {budget}")]
    CylinderBudget { depth: u32, count: u64, budget: u64 },

    #[error(
        "no eigenvalue bracket: lambda(0) = {lambda_lo}, lambda(1) = {lambda_hi} do not straddle 1"
    )]
    NoBracket { lambda_lo: f64, lambda_hi: f64 },

    #[error("collocation order {order} below minimum {min}")]
    InvalidOrder { order: usize, min: usize },

    #[error("tolerance {tol:e} below minimum {min:e}")]
    InvalidTolerance { tol: f64, min: f64 },

    #[error("exponent s = {s} outside [0, 2]")]
    InvalidExponent { s: f64 },

    #[error("power iteration did not converge after {iterations} steps (last delta {delta:e})")]
    NoConvergence { iterations: usize, delta: f64 },

    #[error("slope fit needs at least {needed} strictly increasing sample points")]
    BadFitInput { needed: usize },

    #[error("{base}^{exponent} overflows 62 bits")]
    PowerOverflow { base: u64, exponent: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
