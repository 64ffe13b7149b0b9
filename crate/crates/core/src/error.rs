use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Non-finite or otherwise malformed input.
    #[error("invalid input: {0}")]
    Validation(String),

    /// Input is well formed but outside the physical or convergence domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Adaptive quadrature hit its depth limit; `estimate` is the best value found.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error:e}")]
    Convergence { estimate: f64, error: f64 },

    #[error("root not bracketed on [{lo:e}, {hi:e}]")]
    Bracket { lo: f64, hi: f64 },
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "{name} must be finite, got {value}"
        )))
    }
}
