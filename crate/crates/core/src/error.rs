use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("stability index {0} outside (0, 2]")]
    InvalidAlpha(f64),

    #[error("covariation is only defined for 1 < alpha <= 2, got alpha = {0}")]
    AlphaOutOfRange(f64),

    #[error("invalid spectral measure: {0}")]
    InvalidMeasure(String),

    #[error("coefficient matrix has complex eigenvalues (discriminant {0:.3e})")]
    ComplexEigenvalues(f64),

    #[error("coefficient matrix is not stable: spectral radius {0} >= 1")]
    Unstable(f64),

    #[error("sample size must be at least {min}, got {got}")]
    SampleSize { min: usize, got: usize },

    #[error("lag {0} exceeds the series cap of 1e6; use the asymptotic formulas")]
    LagTooLarge(usize),

    #[error("series truncation failed to reach tolerance {tol:.3e} within {max_terms} terms")]
    TruncationFailed { tol: f64, max_terms: usize },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("asymptotic constants undefined: {0}")]
    AsymptoticsUndefined(String),

    #[error("empirical characteristic function value {value:.3e} is not positive (path too short?)")]
    NonPositiveCharFn { value: f64 },

    #[error("FLOM exponent p = {0} must lie in (1, 2)")]
    InvalidExponent(f64),

    #[error("empirical p-th absolute moment of the lagged component is zero")]
    ZeroMoment,

    #[error("empirical covariation is indistinguishable from zero on every lag of the window")]
    UndefinedRatio,

    #[error("invalid lag window [{lo}, {hi}]")]
    InvalidWindow { lo: usize, hi: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
