use crate::diophantine::SimultaneousApprox;

/// Crate-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("input must be non-empty")]
    EmptyInput,
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("l^p exponent must satisfy p >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("invalid map specification: {0}")]
    InvalidMap(String),
    #[error("endpoint gap {gap} is not an integer multiple of 2*pi")]
    NonIntegerWinding { gap: f64 },
    #[error("lift fails the continuity budget near t={t}: increment {increment} exceeds {allowed}")]
    DiscontinuousLift { t: f64, increment: f64, allowed: f64 },
    #[error("search budget {budget} exhausted; best Q={} with max error {:.3e}", best.q, best.max_error)]
    BudgetExhausted {
        budget: u64,
        best: Box<SimultaneousApprox>,
    },
    #[error("function must be real-valued (max |Im| = {0:.3e})")]
    NotReal(f64),
    #[error("function must have zero mean (|mean| = {0:.3e})")]
    NonzeroMean(f64),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("N must be prime (got {0})")]
    NotPrime(u64),
    #[error("axis {axis} out of range for {m} factors")]
    AxisOutOfRange { axis: usize, m: usize },
    #[error("invalid coordinates: {0}")]
    BadCoordinates(String),
    #[error("weight vector for factor {factor} sums to {sum}, expected 1")]
    BadWeights { factor: usize, sum: f64 },
    #[error("need at least {need} usable entries, have {have}")]
    InsufficientData { need: usize, have: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
