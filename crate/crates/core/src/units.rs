//! Conversion between physical units and the normalized units used internally.
//!
//! Every computation in this crate runs with the pump-resonance linewidth
//! Ω = ω₀/Q set to one: frequencies are ω/Ω and times are t·Ω.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Angular frequency (rad/s) of light with vacuum wavelength `wavelength` (m).
pub fn angular_frequency(wavelength: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / wavelength
}

/// Angular-frequency shift produced by a wavelength shift `delta_lambda`
/// around `wavelength`, to first order: Δω = −2πc·Δλ/λ².
pub fn wavelength_shift_to_angular(delta_lambda: f64, wavelength: f64) -> f64 {
    -2.0 * PI * SPEED_OF_LIGHT * delta_lambda / (wavelength * wavelength)
}

/// Scale factors between physical units and linewidth-normalized units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    omega0: f64,
    q_loaded: f64,
}

impl Normalization {
    pub fn from_resonance(omega0: f64, q_loaded: f64) -> Result<Self> {
        ensure_finite(omega0, "omega0")?;
        ensure_finite(q_loaded, "q_loaded")?;
        if omega0 <= 0.0 || q_loaded <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "resonance needs omega0 > 0 and Q > 0, got omega0 = {omega0}, Q = {q_loaded}"
            )));
        }
        Ok(Self { omega0, q_loaded })
    }

    pub fn from_wavelength(wavelength: f64, q_loaded: f64) -> Result<Self> {
        ensure_finite(wavelength, "wavelength")?;
        if wavelength <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        Self::from_resonance(angular_frequency(wavelength), q_loaded)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn q_loaded(&self) -> f64 {
        self.q_loaded
    }

    /// Linewidth Ω in rad/s.
    pub fn linewidth(&self) -> f64 {
        self.omega0 / self.q_loaded
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.omega0
    }

    /// Seconds to t·Ω.
    pub fn time(&self, seconds: f64) -> f64 {
        seconds * self.linewidth()
    }

    /// t·Ω back to seconds.
    pub fn time_to_seconds(&self, normalized: f64) -> f64 {
        normalized / self.linewidth()
    }

    /// rad/s to ω/Ω.
    pub fn frequency(&self, rad_per_s: f64) -> f64 {
        rad_per_s / self.linewidth()
    }

    /// Normalized detuning δ/Ω produced by a resonance wavelength shift.
    pub fn wavelength_shift(&self, delta_lambda: f64) -> f64 {
        self.frequency(wavelength_shift_to_angular(delta_lambda, self.wavelength()))
    }
}
