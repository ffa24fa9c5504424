use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A model or market parameter failed validation at construction.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A variant-specific applicability condition is violated.
    #[error("condition violated: {0}")]
    Condition(String),

    /// The adaptive integrator exhausted its node budget above tolerance.
    #[error(
        "quadrature failed: requested abs tol {requested:.3e}, reached {achieved:.3e} after {nodes} nodes"
    )]
    QuadratureFailure {
        requested: f64,
        achieved: f64,
        nodes: usize,
    },

    /// Model variant name not present in the registry.
    #[error("unknown model variant `{0}` (expected one of: gamma, ig)")]
    UnknownVariant(String),

    /// The selected variant does not support the requested operation.
    #[error("variant `{variant}` does not support {operation}")]
    Unsupported {
        variant: &'static str,
        operation: &'static str,
    },

    /// Density inversion failed an internal accuracy check.
    #[error("density inversion inaccurate: {0}")]
    Inversion(String),

    /// The FFT output grid does not cover the requested evaluation point.
    #[error("fft grid error: {0}")]
    FftGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
