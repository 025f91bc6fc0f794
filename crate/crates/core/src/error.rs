use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The oscillatory factor e^{iνz} is under-sampled by the frequency grid.
    #[error(
        "grid too coarse: |z|·Δν = {product:.4} exceeds π at z = {z}; \
         refine the frequency grid (more points or a smaller nu_max)"
    )]
    GridTooCoarse { z: f64, spacing: f64, product: f64 },

    #[error("grid mismatch: state grid has {state} nodes, field expansion grid has {field} nodes")]
    GridMismatch { state: usize, field: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
