use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What to do when a spectrum has not decayed at the edges of its grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationGuard {
    /// Largest allowed edge magnitude relative to the peak magnitude.
    pub tolerance: f64,
    /// Fail instead of logging a warning.
    pub strict: bool,
}

impl Default for TruncationGuard {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            strict: false,
        }
    }
}

/// Discretization settings. Frequencies are in units of the pump linewidth Ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Numerics {
    /// Points per axis of the joint spectral amplitude.
    pub jsa_points: usize,
    /// Half-width of each JSA axis around its resonance.
    pub jsa_window: f64,
    /// Minimum number of points of 1-D pump grids.
    pub pump_min_points: usize,
    /// Largest pump-grid spacing.
    pub pump_max_spacing: f64,
    /// Pump grids extend at least this far from the center.
    pub pump_min_half_width: f64,
    /// Pump grids extend at least this many 1/τ_p (and σ for target pumps).
    pub pump_pulse_widths: f64,
    pub guard: TruncationGuard,
    /// Use the truncated Schmidt solver for purity evaluations.
    pub truncated_svd: bool,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            jsa_points: 512,
            jsa_window: 6.0,
            pump_min_points: 1024,
            pump_max_spacing: 1.0 / 64.0,
            pump_min_half_width: 10.0,
            pump_pulse_widths: 6.0,
            guard: TruncationGuard::default(),
            truncated_svd: false,
        }
    }
}

impl Numerics {
    /// Settings for sweeps and optimizer scans: 128 points per JSA axis.
    pub fn coarse() -> Self {
        Self {
            jsa_points: 128,
            ..Self::default()
        }
    }

    /// Same windows with every grid resolution doubled.
    pub fn doubled(&self) -> Self {
        Self {
            jsa_points: 2 * self.jsa_points,
            pump_min_points: 2 * self.pump_min_points,
            pump_max_spacing: self.pump_max_spacing / 2.0,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("jsa_window", self.jsa_window),
            ("pump_max_spacing", self.pump_max_spacing),
            ("pump_min_half_width", self.pump_min_half_width),
            ("pump_pulse_widths", self.pump_pulse_widths),
            ("guard.tolerance", self.guard.tolerance),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if self.jsa_points < 2 || self.pump_min_points < 2 {
            return Err(Error::InvalidParameter(
                "grids need at least two points per axis".to_string(),
            ));
        }
        Ok(())
    }
}
