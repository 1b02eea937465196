use thiserror::Error;

/// Errors raised by the evaluation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),

    #[error("floating-point q must lie in (0, 1), got {0}")]
    QOutOfRange(f64),

    #[error("expected {expected} spectral variables, got {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("rank {0} is outside the supported range {1}")]
    UnsupportedRank(usize, &'static str),

    #[error("q-factorial argument must be nonnegative, got {0}")]
    NegativeFactorial(i64),

    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,

    #[error("coefficient of z^{monomial:?} is not a nonnegative integer series: {detail}")]
    Positivity { monomial: Vec<i64>, detail: String },

    #[error("zero spectral variable z_{index} raised to negative power {power}")]
    ZeroToNegativePower { index: usize, power: i64 },

    #[error("negative power of q in a truncated power series (q^{0})")]
    NegativeSeriesPower(i64),

    #[error("quadrature did not converge: two-resolution difference {estimate:e} exceeds {tolerance:e}")]
    NonConvergence { estimate: f64, tolerance: f64 },

    #[error("invalid quadrature configuration: {0}")]
    InvalidQuadrature(String),

    #[error("|psi| = {0:e} is too small for a relative residual")]
    VanishingValue(f64),

    #[error("value overflowed the log-domain range")]
    Overflow,

    #[error("unsupported parameter combination: {0}")]
    Incompatible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
