//! Parameter sweeps, rate-constrained purity optimization and sensitivity
//! scans over dual-pulse pump settings.
//!
//! Every evaluation goes through [`Evaluator`], which owns the single-pulse
//! reference R₀ so that all rate ratios in a run share one denominator.

mod constrained;
mod nelder_mead;
mod sensitivity;
mod sweep;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::biphoton::{build_default_jsa, RingSource};
use crate::error::{ensure_finite, Error, Result};
use crate::numerics::Numerics;
use crate::schmidt::{schmidt_spectrum, SvdStrategy};
use crate::spectral::PumpSpec;

pub use constrained::{
    default_inverse_tau_grid, optimize_constrained, optimize_nested, rate_constrained_curve,
    ConstrainedCurvePoint, OptimizeSettings, OptimumReport, OptimumSummary, TracePoint,
};
pub use nelder_mead::{nelder_mead, NelderMeadOutcome, NelderMeadSettings};
pub use sensitivity::{sensitivity_scan, SensitivityAxis, SensitivityCurve, SensitivityPoint};
pub use sweep::{sweep, SweepPlan, SweepPoint, SweepResult, SweepSummary};

/// Below this R/R₀ the purity of a point is reported as undefined.
pub const DEFAULT_UNDEFINED_RATE: f64 = 1e-6;

/// `n` evenly spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        let range = Self { min, max, n };
        range.validate("axis")?;
        Ok(range)
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        ensure_finite(self.min, "axis minimum")?;
        ensure_finite(self.max, "axis maximum")?;
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!(
                "{name} needs at least 2 points, got {}",
                self.n
            )));
        }
        if self.min >= self.max {
            return Err(Error::InvalidParameter(format!(
                "{name} range must satisfy min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }

    /// Weighted form, so that values of a range symmetric about zero are
    /// exact negatives of each other.
    pub fn value(&self, k: usize) -> f64 {
        let last = (self.n - 1) as f64;
        ((last - k as f64) * self.min + k as f64 * self.max) / last
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.value(k)).collect()
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }
}

/// Purity and rate of one pump configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEvaluation {
    /// Absent when R/R₀ is below the evaluator's undefined threshold.
    pub purity: Option<f64>,
    pub rate_ratio: f64,
}

/// The R₀ configuration every ratio is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceInfo {
    pub pump: PumpSpec,
    pub norm_sq: f64,
    pub purity: f64,
}

/// Builds JSAs for pump variations of a template source and reports purity
/// and R/R₀.
#[derive(Debug, Clone)]
pub struct Evaluator {
    template: RingSource,
    numerics: Numerics,
    reference: ReferenceInfo,
    undefined_below: f64,
}

impl Evaluator {
    /// Evaluates the single-pulse reference at the template's τ_p once.
    pub fn new(template: RingSource, numerics: Numerics, undefined_below: f64) -> Result<Self> {
        numerics.validate()?;
        ensure_finite(undefined_below, "undefined rate threshold")?;
        if undefined_below < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "undefined rate threshold must be non-negative, got {undefined_below}"
            )));
        }
        let reference_source = template.single_pulse_reference()?;
        let jsa = build_default_jsa(&reference_source, &numerics)?;
        if jsa.norm_sq() == 0.0 {
            return Err(Error::ZeroReference);
        }
        let purity = schmidt_spectrum(&jsa, strategy(&numerics))?.purity();
        let reference = ReferenceInfo {
            pump: reference_source.pump,
            norm_sq: jsa.norm_sq(),
            purity,
        };
        Ok(Self {
            template,
            numerics,
            reference,
            undefined_below,
        })
    }

    pub fn template(&self) -> &RingSource {
        &self.template
    }

    pub fn numerics(&self) -> &Numerics {
        &self.numerics
    }

    pub fn reference(&self) -> &ReferenceInfo {
        &self.reference
    }

    pub fn tau_p(&self) -> f64 {
        self.template.pump.tau_p()
    }

    /// Dual pulse (η, Δτ, φ) at the template's τ_p.
    pub fn dual_pulse(&self, eta: f64, delta_tau: f64, phi: f64) -> Result<RingSource> {
        Ok(self
            .template
            .with_pump(PumpSpec::dual_pulse(self.tau_p(), eta, delta_tau, phi)?))
    }

    pub fn evaluate(&self, eta: f64, delta_tau: f64, phi: f64) -> Result<PointEvaluation> {
        self.evaluate_source(&self.dual_pulse(eta, delta_tau, phi)?)
    }

    /// Any source variation (pump, detuning, energy) against the same R₀.
    pub fn evaluate_source(&self, source: &RingSource) -> Result<PointEvaluation> {
        let jsa = build_default_jsa(source, &self.numerics)?;
        let rate_ratio = jsa.norm_sq() / self.reference.norm_sq;
        if rate_ratio < self.undefined_below || jsa.norm_sq() == 0.0 {
            return Ok(PointEvaluation {
                purity: None,
                rate_ratio,
            });
        }
        let purity = schmidt_spectrum(&jsa, strategy(&self.numerics))?.purity();
        Ok(PointEvaluation {
            purity: Some(purity),
            rate_ratio,
        })
    }
}

fn strategy(numerics: &Numerics) -> SvdStrategy {
    if numerics.truncated_svd {
        SvdStrategy::Truncated { initial_rank: 8 }
    } else {
        SvdStrategy::Full
    }
}

/// Factor on the incident pulse energy that brings R back to R₀, given R/R₀
/// (the pair rate scales with the square of the pulse energy).
pub fn compensating_pulse_energy(rate_ratio: f64) -> Result<f64> {
    if !(rate_ratio.is_finite() && rate_ratio > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rate ratio must be positive, got {rate_ratio}"
        )));
    }
    Ok(1.0 / rate_ratio.sqrt())
}

/// φ wrapped to (−π, π].
pub fn wrap_phase(phi: f64) -> f64 {
    let wrapped = phi.rem_euclid(2.0 * PI);
    if wrapped > PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Resonance;

    fn evaluator(tau: f64) -> Evaluator {
        let template = RingSource::new(Resonance::unit(), PumpSpec::single(tau).unwrap());
        Evaluator::new(
            template,
            Numerics {
                jsa_points: 64,
                ..Numerics::coarse()
            },
            DEFAULT_UNDEFINED_RATE,
        )
        .unwrap()
    }

    #[test]
    fn axis_values_are_symmetric() {
        let axis = AxisRange::new(-1.0, 1.0, 21).unwrap();
        for k in 0..21 {
            assert_eq!(axis.value(k), -axis.value(20 - k));
        }
        assert_eq!(axis.value(0), -1.0);
        assert_eq!(axis.value(20), 1.0);
        assert!(AxisRange::new(0.0, 1.0, 1).is_err());
        assert!(AxisRange::new(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn unit_eta_reproduces_reference() {
        let ev = evaluator(0.2);
        let point = ev.evaluate(1.0, 0.7, PI).unwrap();
        assert_eq!(point.rate_ratio, 1.0);
        assert_eq!(point.purity, Some(ev.reference().purity));
    }

    #[test]
    fn balanced_zero_delay_is_undefined() {
        let point = evaluator(0.2).evaluate(0.5, 0.0, PI).unwrap();
        assert!(point.rate_ratio < 1e-10);
        assert_eq!(point.purity, None);
    }

    #[test]
    fn compensation_factor() {
        assert!((compensating_pulse_energy(0.2).unwrap() - 2.236_067_977).abs() < 1e-9);
        assert!(compensating_pulse_energy(0.0).is_err());
    }

    #[test]
    fn phase_wrapping() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }
}
