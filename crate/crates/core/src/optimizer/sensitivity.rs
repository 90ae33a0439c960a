//! Purity of a fixed pump configuration under resonance drift or
//! interferometer phase error.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::sweep::optional;
use super::{wrap_phase, Evaluator};
use crate::biphoton::RingSource;
use crate::error::{Error, Result};
use crate::spectral::{PumpShape, PumpSpec};
use crate::units::Normalization;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axis", rename_all = "snake_case")]
pub enum SensitivityAxis {
    /// Ring resonance shifts Δλ in meters, converted with the resonator's
    /// wavelength and loaded Q.
    WavelengthShift {
        normalization: Normalization,
        shifts: Vec<f64>,
    },
    /// Ring detuning δ in units of Ω.
    Detuning { values: Vec<f64> },
    /// Deviation of φ from the base pump's phase, in radians.
    PhaseDeviation { values: Vec<f64> },
}

impl SensitivityAxis {
    fn parameters(&self) -> &[f64] {
        match self {
            Self::WavelengthShift { shifts, .. } => shifts,
            Self::Detuning { values } | Self::PhaseDeviation { values } => values,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::WavelengthShift { .. } => "delta_lambda_m",
            Self::Detuning { .. } => "detuning",
            Self::PhaseDeviation { .. } => "phi_deviation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityPoint {
    /// The scanned value in the axis' own units.
    pub parameter: f64,
    /// Ring detuning δ/Ω.
    pub detuning: f64,
    pub phi: f64,
    pub purity: Option<f64>,
    pub rate_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityCurve {
    pub axis: String,
    /// Purity of the unperturbed configuration.
    pub base_purity: Option<f64>,
    pub points: Vec<SensitivityPoint>,
}

impl SensitivityCurve {
    /// Smallest |parameter| at which purity falls below `threshold`, walking
    /// outward from zero on each side and interpolating linearly between the
    /// last sample above and the first below. Undefined purity counts as
    /// below. `None` when the curve never drops within the sampled range.
    pub fn first_drop_below(&self, threshold: f64) -> Option<f64> {
        let below = |p: &SensitivityPoint| p.purity.is_none_or(|v| v < threshold);
        let side = |mut pts: Vec<&SensitivityPoint>| -> Option<f64> {
            pts.sort_by(|a, b| a.parameter.abs().total_cmp(&b.parameter.abs()));
            let k = pts.iter().position(|p| below(p))?;
            let hit = pts[k];
            if k == 0 {
                return Some(hit.parameter.abs());
            }
            let prev = pts[k - 1];
            match (prev.purity, hit.purity) {
                (Some(a), Some(b)) if a != b => {
                    let (x0, x1) = (prev.parameter.abs(), hit.parameter.abs());
                    Some(x0 + (a - threshold) / (a - b) * (x1 - x0))
                }
                _ => Some(hit.parameter.abs()),
            }
        };
        let positive = side(self.points.iter().filter(|p| p.parameter >= 0.0).collect());
        let negative = side(self.points.iter().filter(|p| p.parameter <= 0.0).collect());
        match (positive, negative) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Columns `<axis>,detuning,phi,purity,rate_ratio`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{},detuning,phi,purity,rate_ratio", self.axis)?;
        for p in &self.points {
            writeln!(
                w,
                "{},{},{},{},{}",
                p.parameter,
                p.detuning,
                p.phi,
                optional(p.purity),
                optional(p.rate_ratio)
            )?;
        }
        Ok(())
    }
}

/// Scan `axis` around `evaluator`'s template source. Rates are relative to
/// the evaluator's unshifted single-pulse reference. Failed points are
/// recorded and the scan continues.
pub fn sensitivity_scan(evaluator: &Evaluator, axis: &SensitivityAxis) -> Result<SensitivityCurve> {
    let base = evaluator.template();
    let base_phi = match base.pump.shape() {
        PumpShape::DualPulse { phi, .. } => Some(phi),
        _ => None,
    };
    if matches!(axis, SensitivityAxis::PhaseDeviation { .. }) && base_phi.is_none() {
        return Err(Error::InvalidParameter(
            "a phase scan needs a dual-pulse pump".to_string(),
        ));
    }
    let base_detuning = base.pump_res.detuning();
    let base_purity = evaluator.evaluate_source(base)?.purity;

    let points = axis
        .parameters()
        .iter()
        .map(|&parameter| {
            let (source, detuning, phi) = perturbed(base, axis, parameter, base_detuning);
            let phi = phi.or(base_phi).unwrap_or(f64::NAN);
            let outcome = source.and_then(|s| evaluator.evaluate_source(&s));
            match outcome {
                Ok(e) => SensitivityPoint {
                    parameter,
                    detuning,
                    phi,
                    purity: e.purity,
                    rate_ratio: Some(e.rate_ratio),
                    error: None,
                },
                Err(e) => SensitivityPoint {
                    parameter,
                    detuning,
                    phi,
                    purity: None,
                    rate_ratio: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(SensitivityCurve {
        axis: axis.label().to_string(),
        base_purity,
        points,
    })
}

fn perturbed(
    base: &RingSource,
    axis: &SensitivityAxis,
    parameter: f64,
    base_detuning: f64,
) -> (Result<RingSource>, f64, Option<f64>) {
    match axis {
        SensitivityAxis::WavelengthShift { normalization, .. } => {
            let detuning = base_detuning + normalization.wavelength_shift(parameter);
            (Ok(base.with_detuning(detuning)), detuning, None)
        }
        SensitivityAxis::Detuning { .. } => {
            let detuning = base_detuning + parameter;
            (Ok(base.with_detuning(detuning)), detuning, None)
        }
        SensitivityAxis::PhaseDeviation { .. } => {
            let PumpShape::DualPulse {
                eta,
                delta_tau,
                phi,
            } = base.pump.shape()
            else {
                unreachable!("checked by the caller");
            };
            let phi = wrap_phase(phi + parameter);
            let source = PumpSpec::dual_pulse(base.pump.tau_p(), eta, delta_tau, phi)
                .map(|p| base.with_pump(p));
            (source, base_detuning, Some(phi))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Numerics;
    use crate::optimizer::DEFAULT_UNDEFINED_RATE;
    use crate::spectral::Resonance;
    use std::f64::consts::PI;

    fn curve(values: &[(f64, Option<f64>)]) -> SensitivityCurve {
        let points = values
            .iter()
            .map(|&(parameter, purity)| SensitivityPoint {
                parameter,
                detuning: 0.0,
                phi: PI,
                purity,
                rate_ratio: Some(1.0),
                error: None,
            })
            .collect();
        SensitivityCurve {
            axis: "detuning".into(),
            base_purity: Some(1.0),
            points,
        }
    }

    #[test]
    fn drop_is_interpolated_and_takes_nearer_side() {
        let c = curve(&[
            (-2.0, Some(0.9)),
            (-1.0, Some(0.99)),
            (0.0, Some(1.0)),
            (1.0, Some(0.98)),
            (2.0, Some(0.96)),
        ]);
        // negative side: 0.99 → 0.9 crosses 0.95 at 1 + 0.04/0.09
        let expected = 1.0 + 0.04 / 0.09;
        assert!((c.first_drop_below(0.95).unwrap() - expected).abs() < 1e-12);
        assert_eq!(c.first_drop_below(0.5), None);
        let undefined = curve(&[(0.0, Some(1.0)), (1.0, None)]);
        assert_eq!(undefined.first_drop_below(0.95), Some(1.0));
    }

    #[test]
    fn zero_shift_recovers_base() {
        let pump = PumpSpec::dual_pulse(0.2, 0.6, 0.3, PI).unwrap();
        let source = RingSource::new(Resonance::unit(), pump);
        let numerics = Numerics {
            jsa_points: 48,
            ..Numerics::coarse()
        };
        let ev = Evaluator::new(source, numerics, DEFAULT_UNDEFINED_RATE).unwrap();
        let norm = Normalization::from_wavelength(1550e-9, 1e5).unwrap();
        let axis = SensitivityAxis::WavelengthShift {
            normalization: norm,
            shifts: vec![-5e-12, 0.0, 5e-12],
        };
        let c = sensitivity_scan(&ev, &axis).unwrap();
        assert_eq!(c.points[1].purity, c.base_purity);
        assert!(c.points[0].purity != c.base_purity);
        let phase = sensitivity_scan(
            &ev,
            &SensitivityAxis::PhaseDeviation {
                values: vec![0.0, 0.1],
            },
        )
        .unwrap();
        assert_eq!(phase.points[0].purity, c.base_purity);
    }
}
