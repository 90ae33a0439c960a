use thiserror::Error;

/// Errors produced while building spectra, joint amplitudes and optimizations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The in-resonator field has not decayed at the grid edges, so the
    /// self-convolution would silently truncate the spectrum.
    #[error(
        "spectral truncation: edge magnitude is {ratio:.3e} of peak (tolerance {tolerance:.1e})"
    )]
    Truncation { ratio: f64, tolerance: f64 },

    #[error(
        "F_p grid covers [{:.6}, {:.6}] but [{:.6}, {:.6}] is required",
        available.0, available.1, required.0, required.1
    )]
    Coverage {
        required: (f64, f64),
        available: (f64, f64),
    },

    #[error("joint spectral amplitude is identically zero")]
    ZeroAmplitude,

    #[error("reference rate is zero")]
    ZeroReference,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("singular value decomposition did not converge")]
    SvdNoConvergence,

    #[error("no feasible point satisfies R/R0 >= {rate_floor}")]
    Infeasible { rate_floor: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical guards (truncation, coverage,
    /// non-finite data, SVD convergence) as opposed to bad inputs.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. }
                | Error::Coverage { .. }
                | Error::NonFinite(_)
                | Error::SvdNoConvergence
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(value: f64, what: &str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{what} must be finite, got {value}"
        )))
    }
}
