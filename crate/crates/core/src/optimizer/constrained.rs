//! Maximize purity over (η, Δτ) subject to R/R₀ ≥ c.
//!
//! A coarse grid scan picks the best feasible point, then a Nelder–Mead
//! simplex refines it. Infeasible or out-of-box points score +∞, so the
//! refinement can only improve on its seed.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nelder_mead::{nelder_mead, NelderMeadSettings};
use super::{AxisRange, Evaluator, PointEvaluation, DEFAULT_UNDEFINED_RATE};
use crate::biphoton::RingSource;
use crate::error::{ensure_finite, Error, Result};
use crate::numerics::Numerics;
use crate::spectral::PumpSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizeSettings {
    pub scan_eta: AxisRange,
    /// Also the box ΔτΩ is confined to during refinement.
    pub scan_delta_tau: AxisRange,
    pub phi: f64,
    /// Initial simplex steps in η and ΔτΩ.
    pub initial_step: [f64; 2],
    pub refine: NelderMeadSettings,
    pub numerics: Numerics,
    pub undefined_below: f64,
}

impl Default for OptimizeSettings {
    /// 41×41 scan over η ∈ [0, 1], ΔτΩ ∈ [−2, 2], φ = π.
    fn default() -> Self {
        Self {
            scan_eta: AxisRange {
                min: 0.0,
                max: 1.0,
                n: 41,
            },
            scan_delta_tau: AxisRange {
                min: -2.0,
                max: 2.0,
                n: 41,
            },
            phi: PI,
            initial_step: [0.0125, 0.05],
            refine: NelderMeadSettings::default(),
            numerics: Numerics::coarse(),
            undefined_below: DEFAULT_UNDEFINED_RATE,
        }
    }
}

impl OptimizeSettings {
    pub fn validate(&self) -> Result<()> {
        self.scan_eta.validate("scan_eta")?;
        self.scan_delta_tau.validate("scan_delta_tau")?;
        if self.scan_eta.min < 0.0 || self.scan_eta.max > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "eta range must lie in [0, 1], got [{}, {}]",
                self.scan_eta.min, self.scan_eta.max
            )));
        }
        ensure_finite(self.phi, "phi")?;
        if self
            .initial_step
            .iter()
            .any(|s| !(s.is_finite() && *s > 0.0))
        {
            return Err(Error::InvalidParameter(
                "initial simplex steps must be positive".to_string(),
            ));
        }
        self.numerics.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub eta: f64,
    pub delta_tau: f64,
    pub purity: Option<f64>,
    pub rate_ratio: Option<f64>,
    pub feasible: bool,
}

impl TracePoint {
    fn new(eta: f64, delta_tau: f64, eval: Option<PointEvaluation>, rate_floor: f64) -> Self {
        Self {
            eta,
            delta_tau,
            purity: eval.and_then(|e| e.purity),
            rate_ratio: eval.map(|e| e.rate_ratio),
            feasible: eval.is_some_and(|e| feasible(&e, rate_floor)),
        }
    }
}

fn feasible(eval: &PointEvaluation, rate_floor: f64) -> bool {
    eval.purity.is_some() && eval.rate_ratio >= rate_floor
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumReport {
    pub tau_p: f64,
    pub phi: f64,
    pub rate_floor: f64,
    pub best_eta: f64,
    pub best_delta_tau: f64,
    pub best_purity: f64,
    pub achieved_rate_ratio: f64,
    /// Starting point of the refinement.
    pub seed: TracePoint,
    /// `"scan"`, or the tighter floor whose optimum seeded this one.
    pub seed_origin: String,
    pub evaluations: usize,
    pub converged: bool,
    /// Every scan point, row-major in η, with feasibility for this floor.
    pub scan_trace: Vec<TracePoint>,
    /// Best simplex vertex after each refinement iteration.
    pub refine_trace: Vec<TracePoint>,
}

/// [`OptimumReport`] without the traces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumSummary {
    pub tau_p: f64,
    pub phi: f64,
    pub rate_floor: f64,
    pub best_eta: f64,
    pub best_delta_tau: f64,
    pub best_purity: f64,
    pub achieved_rate_ratio: f64,
    pub seed_origin: String,
    pub evaluations: usize,
    pub converged: bool,
}

impl OptimumReport {
    pub fn summary(&self) -> OptimumSummary {
        OptimumSummary {
            tau_p: self.tau_p,
            phi: self.phi,
            rate_floor: self.rate_floor,
            best_eta: self.best_eta,
            best_delta_tau: self.best_delta_tau,
            best_purity: self.best_purity,
            achieved_rate_ratio: self.achieved_rate_ratio,
            seed_origin: self.seed_origin.clone(),
            evaluations: self.evaluations,
            converged: self.converged,
        }
    }
}

struct ScanPoint {
    eta: f64,
    delta_tau: f64,
    eval: PointEvaluation,
}

/// Any failing scan point aborts the optimization with its error.
fn scan(evaluator: &Evaluator, settings: &OptimizeSettings) -> Result<Vec<ScanPoint>> {
    let n_dt = settings.scan_delta_tau.n;
    (0..settings.scan_eta.n * n_dt)
        .into_par_iter()
        .map(|index| {
            let eta = settings.scan_eta.value(index / n_dt);
            let delta_tau = settings.scan_delta_tau.value(index % n_dt);
            evaluator
                .evaluate(eta, delta_tau, settings.phi)
                .map(|eval| ScanPoint {
                    eta,
                    delta_tau,
                    eval,
                })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn refine(
    evaluator: &Evaluator,
    settings: &OptimizeSettings,
    points: &[ScanPoint],
    rate_floor: f64,
    tighter: Option<&OptimumReport>,
) -> Result<OptimumReport> {
    let mut seed: Option<(f64, f64, PointEvaluation)> = None;
    for p in points.iter().filter(|p| feasible(&p.eval, rate_floor)) {
        if seed.is_none_or(|(_, _, s)| p.eval.purity > s.purity) {
            seed = Some((p.eta, p.delta_tau, p.eval));
        }
    }
    let mut seed_origin = "scan".to_string();
    if let Some(t) = tighter {
        if seed.is_none_or(|(_, _, s)| Some(t.best_purity) > s.purity) {
            let eval = PointEvaluation {
                purity: Some(t.best_purity),
                rate_ratio: t.achieved_rate_ratio,
            };
            seed = Some((t.best_eta, t.best_delta_tau, eval));
            seed_origin = format!("rate_floor {}", t.rate_floor);
        }
    }
    let (eta0, dt0, eval0) = seed.ok_or(Error::Infeasible { rate_floor })?;

    let (dt_min, dt_max) = (settings.scan_delta_tau.min, settings.scan_delta_tau.max);
    let mut visited: Vec<([f64; 2], Option<PointEvaluation>)> = vec![([eta0, dt0], Some(eval0))];
    let objective = |x: &[f64]| -> f64 {
        let (eta, dt) = (x[0], x[1]);
        let eval = if (0.0..=1.0).contains(&eta) && (dt_min..=dt_max).contains(&dt) {
            match evaluator.evaluate(eta, dt, settings.phi) {
                Ok(e) => Some(e),
                Err(e) => {
                    log::warn!("refinement point eta = {eta}, delta_tau = {dt} failed: {e}");
                    None
                }
            }
        } else {
            None
        };
        visited.push(([eta, dt], eval));
        match eval {
            Some(e) if feasible(&e, rate_floor) => -e.purity.unwrap_or_default(),
            _ => f64::INFINITY,
        }
    };
    let outcome = nelder_mead(
        objective,
        &[eta0, dt0],
        -eval0.purity.unwrap_or_default(),
        &settings.initial_step,
        &settings.refine,
    );
    let lookup = |x: &[f64]| {
        visited
            .iter()
            .rev()
            .find(|(v, _)| v[..] == x[..])
            .and_then(|(_, e)| *e)
    };

    // the seed is feasible, so the best vertex is an evaluated feasible point
    let best = lookup(&outcome.best).expect("simplex vertices are evaluated points");
    let (best_eta, best_delta_tau) = (outcome.best[0], outcome.best[1]);
    let refine_trace = outcome
        .trace
        .iter()
        .map(|(x, _)| TracePoint::new(x[0], x[1], lookup(x), rate_floor))
        .collect();
    let scan_trace = points
        .iter()
        .map(|p| TracePoint::new(p.eta, p.delta_tau, Some(p.eval), rate_floor))
        .collect();
    Ok(OptimumReport {
        tau_p: evaluator.tau_p(),
        phi: settings.phi,
        rate_floor,
        best_eta,
        best_delta_tau,
        best_purity: best.purity.unwrap_or_default(),
        achieved_rate_ratio: best.rate_ratio,
        seed: TracePoint::new(eta0, dt0, Some(eval0), rate_floor),
        seed_origin,
        evaluations: outcome.evaluations,
        converged: outcome.converged,
        scan_trace,
        refine_trace,
    })
}

fn check_floor(rate_floor: f64) -> Result<()> {
    if !(rate_floor.is_finite() && rate_floor >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rate floor must be finite and non-negative, got {rate_floor}"
        )));
    }
    Ok(())
}

/// Maximize purity at τ_pΩ = `tau_p` subject to R/R₀ ≥ `rate_floor`.
/// Resonances and energy settings come from `template`.
pub fn optimize_constrained(
    template: &RingSource,
    tau_p: f64,
    rate_floor: f64,
    settings: &OptimizeSettings,
) -> Result<OptimumReport> {
    optimize_nested(template, tau_p, &[rate_floor], settings)?
        .pop()
        .expect("one floor in, one report out")
}

/// Optimize several rate floors over one shared scan. Floors are processed
/// from tightest to loosest and each optimum seeds the next looser one, so
/// the best purities are non-increasing in the floor. Results come back in
/// the order of `rate_floors`; an infeasible floor yields
/// [`Error::Infeasible`] in its slot.
pub fn optimize_nested(
    template: &RingSource,
    tau_p: f64,
    rate_floors: &[f64],
    settings: &OptimizeSettings,
) -> Result<Vec<Result<OptimumReport>>> {
    settings.validate()?;
    for &floor in rate_floors {
        check_floor(floor)?;
    }
    let template = template.with_pump(PumpSpec::single(tau_p)?);
    let evaluator = Evaluator::new(template, settings.numerics, settings.undefined_below)?;
    let points = scan(&evaluator, settings)?;

    let mut order: Vec<usize> = (0..rate_floors.len()).collect();
    order.sort_by(|&a, &b| rate_floors[b].total_cmp(&rate_floors[a]));
    let mut results: Vec<Option<Result<OptimumReport>>> =
        (0..rate_floors.len()).map(|_| None).collect();
    let mut tighter: Option<OptimumReport> = None;
    for index in order {
        let report = refine(
            &evaluator,
            settings,
            &points,
            rate_floors[index],
            tighter.as_ref(),
        );
        if let Ok(r) = &report {
            tighter = Some(r.clone());
        }
        results[index] = Some(report);
    }
    Ok(results
        .into_iter()
        .map(|r| r.expect("every floor visited"))
        .collect())
}

/// (τ_pΩ)⁻¹ log-spaced from 0.5 to 20, 25 points.
pub fn default_inverse_tau_grid() -> Vec<f64> {
    let (lo, hi, n) = (0.5f64.ln(), 20.0f64.ln(), 25);
    (0..n)
        .map(|k| (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedCurvePoint {
    pub inverse_tau: f64,
    pub single_pulse_purity: f64,
    /// One entry per rate floor; absent when that floor is infeasible.
    pub optima: Vec<Option<OptimumSummary>>,
}

/// Best purity versus (τ_pΩ)⁻¹ for each rate floor, plus the single-pulse
/// purity at each τ_p.
pub fn rate_constrained_curve(
    template: &RingSource,
    inverse_tau: &[f64],
    rate_floors: &[f64],
    settings: &OptimizeSettings,
) -> Result<Vec<ConstrainedCurvePoint>> {
    inverse_tau
        .iter()
        .map(|&inv| {
            ensure_finite(inv, "inverse tau_p")?;
            let tau_p = 1.0 / inv;
            let reports = optimize_nested(template, tau_p, rate_floors, settings)?;
            let reference = Evaluator::new(
                template.with_pump(PumpSpec::single(tau_p)?),
                settings.numerics,
                settings.undefined_below,
            )?;
            let optima = reports
                .into_iter()
                .map(|r| match r {
                    Ok(report) => Ok(Some(report.summary())),
                    Err(Error::Infeasible { .. }) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<_>>()?;
            Ok(ConstrainedCurvePoint {
                inverse_tau: inv,
                single_pulse_purity: reference.reference().purity,
                optima,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Resonance;

    fn settings() -> OptimizeSettings {
        OptimizeSettings {
            scan_eta: AxisRange {
                min: 0.0,
                max: 1.0,
                n: 9,
            },
            scan_delta_tau: AxisRange {
                min: -1.0,
                max: 1.0,
                n: 9,
            },
            numerics: Numerics {
                jsa_points: 48,
                ..Numerics::coarse()
            },
            refine: NelderMeadSettings {
                max_evaluations: 40,
                ..NelderMeadSettings::default()
            },
            ..OptimizeSettings::default()
        }
    }

    fn template() -> RingSource {
        RingSource::new(Resonance::unit(), PumpSpec::single(1.0).unwrap())
    }

    #[test]
    fn nested_floors_are_ordered_and_satisfied() {
        let floors = [0.0, 0.5, 0.2];
        let reports = optimize_nested(&template(), 0.2, &floors, &settings()).unwrap();
        let r: Vec<&OptimumReport> = reports.iter().map(|r| r.as_ref().unwrap()).collect();
        assert!(r[1].best_purity <= r[2].best_purity && r[2].best_purity <= r[0].best_purity);
        for (report, floor) in r.iter().zip(floors) {
            assert!(report.achieved_rate_ratio >= floor - 1e-6);
            assert!(report.best_purity >= report.seed.purity.unwrap());
            assert_eq!(report.scan_trace.len(), 81);
        }
    }

    #[test]
    fn reported_optimum_is_reproducible() {
        let report = optimize_constrained(&template(), 0.2, 0.2, &settings()).unwrap();
        let ev = Evaluator::new(
            template().with_pump(PumpSpec::single(0.2).unwrap()),
            settings().numerics,
            DEFAULT_UNDEFINED_RATE,
        )
        .unwrap();
        let fresh = ev
            .evaluate(report.best_eta, report.best_delta_tau, PI)
            .unwrap();
        assert!((fresh.purity.unwrap() - report.best_purity).abs() < 1e-8);
        assert!((fresh.rate_ratio - report.achieved_rate_ratio).abs() < 1e-8);
    }

    #[test]
    fn unreachable_floor_is_infeasible() {
        let result = optimize_constrained(&template(), 0.2, 50.0, &settings());
        assert!(matches!(result, Err(Error::Infeasible { .. })));
        assert!(matches!(
            optimize_constrained(&template(), 0.2, -0.1, &settings()),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn inverse_tau_grid_endpoints() {
        let g = default_inverse_tau_grid();
        assert_eq!(g.len(), 25);
        assert!((g[0] - 0.5).abs() < 1e-12 && (g[24] - 20.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
