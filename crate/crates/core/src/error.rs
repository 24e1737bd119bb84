use thiserror::Error;

/// Errors raised anywhere in the derivation or verification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("delta applied to a modular-decorated factor {0}")]
    ModularDelta(String),

    #[error("grading violation: term {term} has order {actual}, expected {expected}")]
    Grading {
        term: String,
        actual: i32,
        expected: i32,
    },

    #[error("parametrix identity fails at order {order}: {residual_terms} residual terms")]
    ParametrixFailure { order: i32, residual_terms: usize },

    #[error("no angular moment for xi monomial of degree {0} (table covers degree <= 8)")]
    UnknownMoment(u32),

    #[error("radial exponent mismatch: r^{r_power} with b0 powers summing to {b_total}")]
    ExponentMismatch { r_power: u32, b_total: u32 },

    #[error("terms are not symmetric under permutation of the derivative index: {0}")]
    Asymmetric(String),

    #[error("no closed form for H index {0:?}; use quadrature")]
    UnsupportedIndex(Vec<u32>),

    #[error("H index {0:?} has divergent defining integral")]
    Divergent(Vec<u32>),

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    ConvergenceFailure { tol: f64, estimate: f64 },

    #[error("Fourier support of h exceeds the truncation radius {0}")]
    Truncation(usize),

    #[error("no admissible time window: {0}")]
    Window(String),

    #[error("spectral decomposition failed: {0}")]
    Spectral(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
