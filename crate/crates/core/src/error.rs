use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value evaluating {what} at r = {r}")]
    Evaluation { what: &'static str, r: f64 },

    #[error("operation requires a curvature-bearing metric (warped product or conformally flat)")]
    UnsupportedFamily,

    #[error("capacity zero or undefined: {0}")]
    CapacityUndefined(String),

    #[error("quadrature did not reach tolerance {requested:e} (achieved estimate {achieved:e}, value {value})")]
    Convergence {
        value: f64,
        achieved: f64,
        requested: f64,
    },

    #[error("extrapolation did not converge: last two estimates {previous} and {last}")]
    Extrapolation { previous: f64, last: f64 },

    #[error("Newton iteration failed after {iterations} iterations (residual {residual:e})")]
    Newton { iterations: usize, residual: f64 },

    #[error("boundary metric mismatch: sphere area {metric_area} vs data area {data_area}")]
    BoundaryMismatch { metric_area: f64, data_area: f64 },

    #[error("integration step failed near r = {r}")]
    StepFailure { r: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
