//! Purity and relative-rate maps over a rectangular (η, Δτ) grid.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AxisRange, Evaluator, ReferenceInfo, DEFAULT_UNDEFINED_RATE};
use crate::biphoton::RingSource;
use crate::error::{ensure_finite, Error, Result};
use crate::numerics::Numerics;
use crate::spectral::PumpSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub eta: AxisRange,
    /// Pulse separation ΔτΩ.
    pub delta_tau: AxisRange,
    pub tau_p: f64,
    pub phi: f64,
    pub numerics: Numerics,
    /// R/R₀ below which purity is reported as undefined.
    pub undefined_below: f64,
}

impl Default for SweepPlan {
    /// 21×21 over η ∈ [0, 1], ΔτΩ ∈ [−1, 1] at τ_pΩ = 1/5, φ = π.
    fn default() -> Self {
        Self {
            eta: AxisRange {
                min: 0.0,
                max: 1.0,
                n: 21,
            },
            delta_tau: AxisRange {
                min: -1.0,
                max: 1.0,
                n: 21,
            },
            tau_p: 0.2,
            phi: PI,
            numerics: Numerics::coarse(),
            undefined_below: DEFAULT_UNDEFINED_RATE,
        }
    }
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        self.eta.validate("eta")?;
        self.delta_tau.validate("delta_tau")?;
        if self.eta.min < 0.0 || self.eta.max > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "eta range must lie in [0, 1], got [{}, {}]",
                self.eta.min, self.eta.max
            )));
        }
        ensure_finite(self.phi, "phi")?;
        PumpSpec::single(self.tau_p)?;
        self.numerics.validate()
    }
}

/// One grid point. `purity` is absent when the rate is below the plan's
/// threshold; both values are absent when the build failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub eta: f64,
    pub delta_tau: f64,
    pub purity: Option<f64>,
    pub rate_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepPoint {
    pub fn status(&self) -> &'static str {
        match (&self.error, self.purity) {
            (Some(_), _) => "error",
            (None, Some(_)) => "ok",
            (None, None) => "rate_zero",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub plan: SweepPlan,
    pub reference: ReferenceInfo,
    /// Row-major, rows indexed by η.
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub plan: SweepPlan,
    pub reference: ReferenceInfo,
    pub best: Option<SweepPoint>,
    pub undefined_points: usize,
    pub failed_points: Vec<SweepPoint>,
}

/// Evaluate every (η, Δτ) of the plan; the template supplies the resonances
/// and energy settings, its pump is replaced. Points are independent and run
/// in parallel; each result is stored at its own grid position.
pub fn sweep(plan: &SweepPlan, template: &RingSource) -> Result<SweepResult> {
    plan.validate()?;
    let template = template.with_pump(PumpSpec::single(plan.tau_p)?);
    let evaluator = Evaluator::new(template, plan.numerics, plan.undefined_below)?;
    let n_dt = plan.delta_tau.n;
    let points = (0..plan.eta.n * n_dt)
        .into_par_iter()
        .map(|index| {
            let eta = plan.eta.value(index / n_dt);
            let delta_tau = plan.delta_tau.value(index % n_dt);
            match evaluator.evaluate(eta, delta_tau, plan.phi) {
                Ok(p) => SweepPoint {
                    eta,
                    delta_tau,
                    purity: p.purity,
                    rate_ratio: Some(p.rate_ratio),
                    error: None,
                },
                Err(e) => {
                    log::warn!("sweep point eta = {eta}, delta_tau = {delta_tau} failed: {e}");
                    SweepPoint {
                        eta,
                        delta_tau,
                        purity: None,
                        rate_ratio: None,
                        error: Some(e.to_string()),
                    }
                }
            }
        })
        .collect();
    Ok(SweepResult {
        plan: *plan,
        reference: *evaluator.reference(),
        points,
    })
}

impl SweepResult {
    pub fn shape(&self) -> (usize, usize) {
        (self.plan.eta.n, self.plan.delta_tau.n)
    }

    pub fn point(&self, eta_index: usize, delta_tau_index: usize) -> &SweepPoint {
        &self.points[eta_index * self.plan.delta_tau.n + delta_tau_index]
    }

    pub fn purity_matrix(&self) -> Vec<Vec<Option<f64>>> {
        self.points
            .chunks(self.plan.delta_tau.n)
            .map(|row| row.iter().map(|p| p.purity).collect())
            .collect()
    }

    pub fn rate_matrix(&self) -> Vec<Vec<Option<f64>>> {
        self.points
            .chunks(self.plan.delta_tau.n)
            .map(|row| row.iter().map(|p| p.rate_ratio).collect())
            .collect()
    }

    /// Highest defined purity; the first in grid order on ties.
    pub fn best(&self) -> Option<&SweepPoint> {
        self.points.iter().filter(|p| p.purity.is_some()).fold(
            None,
            |best: Option<&SweepPoint>, p| match best {
                Some(b) if b.purity >= p.purity => Some(b),
                _ => Some(p),
            },
        )
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepPoint> {
        self.points.iter().filter(|p| p.error.is_some())
    }

    pub fn summary(&self) -> SweepSummary {
        SweepSummary {
            plan: self.plan,
            reference: self.reference,
            best: self.best().cloned(),
            undefined_points: self
                .points
                .iter()
                .filter(|p| p.status() == "rate_zero")
                .count(),
            failed_points: self.failures().cloned().collect(),
        }
    }

    /// Columns `eta,delta_tau,purity,rate_ratio,status`; missing values are
    /// left empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "eta,delta_tau,purity,rate_ratio,status")?;
        for p in &self.points {
            writeln!(
                w,
                "{},{},{},{},{}",
                p.eta,
                p.delta_tau,
                optional(p.purity),
                optional(p.rate_ratio),
                p.status()
            )?;
        }
        Ok(())
    }
}

pub(crate) fn optional(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Resonance;

    fn small_plan() -> SweepPlan {
        SweepPlan {
            eta: AxisRange {
                min: 0.0,
                max: 1.0,
                n: 5,
            },
            delta_tau: AxisRange {
                min: -1.0,
                max: 1.0,
                n: 5,
            },
            numerics: Numerics {
                jsa_points: 48,
                ..Numerics::coarse()
            },
            ..SweepPlan::default()
        }
    }

    fn template() -> RingSource {
        RingSource::new(Resonance::unit(), PumpSpec::single(1.0).unwrap())
    }

    #[test]
    fn extremes_recover_single_pulse() {
        let result = sweep(&small_plan(), &template()).unwrap();
        let single = result.reference.purity;
        for j in 0..5 {
            assert!((result.point(0, j).purity.unwrap() - single).abs() < 1e-12);
            assert_eq!(result.point(4, j).purity, Some(single));
        }
    }

    #[test]
    fn balanced_zero_delay_is_marked() {
        let result = sweep(&small_plan(), &template()).unwrap();
        let p = result.point(2, 2);
        assert_eq!(p.status(), "rate_zero");
        let mut csv = Vec::new();
        result.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), 26);
        assert!(text
            .lines()
            .any(|l| l.starts_with("0.5,0,,") && l.ends_with(",rate_zero")));
    }

    #[test]
    fn rejects_bad_plans() {
        let mut plan = small_plan();
        plan.eta.max = 1.5;
        assert!(matches!(
            sweep(&plan, &template()),
            Err(Error::InvalidParameter(_))
        ));
        let mut plan = small_plan();
        plan.delta_tau.n = 1;
        assert!(sweep(&plan, &template()).is_err());
    }
}
