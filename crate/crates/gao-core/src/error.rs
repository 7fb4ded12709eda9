use thiserror::Error;

/// Errors surfaced by the pricing engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An integrator or simulator produced a non-finite state.
    #[error("numerical blow-up at step {step} (t = {t})")]
    NumericalBlowup { step: usize, t: f64 },

    /// Laplace transforms of the square-root factors are only defined for
    /// non-negative discount loadings.
    #[error("unsupported exponent u = {0}; negative discount loadings are not priced")]
    UnsupportedExponent(f64),

    /// The block-matrix linearization of the matrix Riccati equation hit a
    /// singular lower-right block.
    #[error("Riccati linearization breakdown at tau = {tau}: |det A22| = {det:e}")]
    LinearizationBreakdown { tau: f64, det: f64 },

    #[error("transform diverges: {0}")]
    DivergentTransform(String),

    /// The transformed-measure law failed the bond-consistency identity.
    #[error(
        "measure construction failed: bond-consistency residual {max_residual:e} at tenor {tenor}"
    )]
    MeasureConstruction { max_residual: f64, tenor: usize },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    /// Exact terminal sampling needs an integer shape; fall back to the
    /// path-simulation estimator otherwise.
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
