//! The five subcommands. Each resolves and validates everything it needs
//! before creating its output directory.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use ringpair::biphoton::{build_default_jsa, jsi, relative_rate, RingSource};
use ringpair::optimizer::{
    compensating_pulse_energy, optimize_nested, sensitivity_scan, sweep, Evaluator, OptimumReport,
    SweepSummary, TracePoint,
};
use ringpair::schmidt::{schmidt_spectrum, SvdStrategy};
use ringpair::spectral::{
    lorentzian_lineshape, to_time_domain, ComplexSpectrum, FrequencyGrid, PumpSpec,
};
use ringpair::units::Normalization;
use ringpair::{Error, Numerics};
use serde::Serialize;

use crate::config::{AxisName, Provenance, Resolved, RunConfig};
use crate::error::{CliError, Result};
use crate::output::OutputDir;

/// The normalized quantities every summary reports next to the raw config.
#[derive(Serialize)]
struct ResolvedInfo<'a> {
    normalization: Option<&'a Normalization>,
    linewidth_rad_per_s: Option<f64>,
    source: &'a RingSource,
    numerics: &'a Numerics,
}

fn resolved_info<'a>(resolved: &'a Resolved, numerics: &'a Numerics) -> ResolvedInfo<'a> {
    ResolvedInfo {
        normalization: resolved.normalization.as_ref(),
        linewidth_rad_per_s: resolved.normalization.map(|n| n.linewidth()),
        source: &resolved.source,
        numerics,
    }
}

#[derive(Serialize)]
struct Results<'a, T> {
    resolved: ResolvedInfo<'a>,
    #[serde(flatten)]
    data: T,
}

fn guard_edges(field: &ComplexSpectrum, numerics: &Numerics) -> Result<f64> {
    let ratio = field.edge_ratio();
    if ratio > numerics.guard.tolerance {
        let err = Error::Truncation {
            ratio,
            tolerance: numerics.guard.tolerance,
        };
        if numerics.guard.strict {
            return Err(err.into());
        }
        log::warn!("{err}");
    }
    Ok(ratio)
}

struct PumpColumns {
    alpha: ComplexSpectrum,
    line: ComplexSpectrum,
    field: ComplexSpectrum,
    edge_ratio: f64,
}

impl PumpColumns {
    fn new(source: &RingSource, grid: &FrequencyGrid, numerics: &Numerics) -> Result<Self> {
        let field = source.in_resonator_field(grid)?;
        Ok(Self {
            alpha: source.incident_envelope(grid)?,
            line: lorentzian_lineshape(grid, &source.pump_res),
            edge_ratio: guard_edges(&field, numerics)?,
            field,
        })
    }

    fn write<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "omega,abs_alpha,arg_alpha,abs_l,abs_Ap_sq")?;
        for (k, omega) in self.alpha.grid().points().enumerate() {
            let a = self.alpha.values()[k];
            writeln!(
                w,
                "{omega},{},{},{},{}",
                a.norm(),
                a.arg(),
                self.line.values()[k].norm(),
                self.field.values()[k].norm_sqr()
            )?;
        }
        Ok(())
    }
}

fn write_temporal<W: Write>(w: &mut W, field: &ComplexSpectrum) -> std::io::Result<()> {
    let temporal = to_time_domain(field);
    writeln!(w, "t,abs_Ap_t_sq")?;
    for (t, v) in temporal.times().zip(temporal.intensity()) {
        writeln!(w, "{t},{v}")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SpectrumResults {
    grid_half_width: f64,
    grid_points: usize,
    /// FWHM of |A_p(ω)|² in units of Ω.
    fwhm: Option<f64>,
    reference_fwhm: Option<f64>,
    fwhm_ratio: Option<f64>,
    /// |α_p| has a local minimum at ω = 0.
    dip_at_resonance: bool,
    edge_ratio: f64,
}

pub fn spectrum(config: &RunConfig, resolved: &Resolved, dir: &Path) -> Result<()> {
    let source = &resolved.source;
    let numerics = &resolved.numerics;
    let reference = source.single_pulse_reference()?;
    // both on the configured pump's grid so rows line up
    let grid = FrequencyGrid::for_pump(&source.pump, &source.pump_res, numerics)?;
    let main = PumpColumns::new(source, &grid, numerics)?;
    let refc = PumpColumns::new(&reference, &grid, numerics)?;

    let out = OutputDir::create(dir, "spectrum", config)?;
    out.csv("spectrum.csv", |w| Ok(main.write(w)?))?;
    out.csv("spectrum_reference.csv", |w| Ok(refc.write(w)?))?;
    out.csv("temporal.csv", |w| Ok(write_temporal(w, &main.field)?))?;
    out.csv("temporal_reference.csv", |w| {
        Ok(write_temporal(w, &refc.field)?)
    })?;

    let magnitude = main.alpha.magnitude();
    let c = grid.nearest_index(0.0);
    let dip = c > 0
        && c + 1 < magnitude.len()
        && magnitude[c] < magnitude[c - 1]
        && magnitude[c] < magnitude[c + 1];
    let fwhm = main.field.intensity_fwhm();
    let reference_fwhm = refc.field.intensity_fwhm();
    out.summary(&Results {
        resolved: resolved_info(resolved, numerics),
        data: SpectrumResults {
            grid_half_width: grid.half_width(),
            grid_points: grid.n_points(),
            fwhm,
            reference_fwhm,
            fwhm_ratio: fwhm.zip(reference_fwhm).map(|(a, b)| a / b),
            dip_at_resonance: dip,
            edge_ratio: main.edge_ratio,
        },
    })?;
    Ok(())
}

fn strategy(numerics: &Numerics) -> SvdStrategy {
    if numerics.truncated_svd {
        SvdStrategy::Truncated { initial_rank: 8 }
    } else {
        SvdStrategy::Full
    }
}

#[derive(Serialize)]
struct JsiResults {
    purity: f64,
    schmidt_number: f64,
    rate_ratio: f64,
    idler_axis: [f64; 2],
    signal_axis: [f64; 2],
    points: usize,
}

pub fn jsi_map(config: &RunConfig, resolved: &Resolved, dir: &Path) -> Result<()> {
    let source = &resolved.source;
    let numerics = &resolved.numerics;
    let started = Instant::now();
    let jsa = build_default_jsa(source, numerics)?;
    let reference = build_default_jsa(&source.single_pulse_reference()?, numerics)?;
    let rate_ratio = relative_rate(&jsa, &reference)?;
    let spectrum = schmidt_spectrum(&jsa, strategy(numerics))?;
    let intensity = jsi(&jsa)?;
    log::info!("jsa and schmidt spectrum in {:.2?}", started.elapsed());

    let out = OutputDir::create(dir, "jsi", config)?;
    let (gi, gs) = (intensity.idler_grid(), intensity.signal_grid());
    out.csv("jsi.csv", |w| {
        // first column: ω_i; header row: ω_s
        let axis: Vec<String> = gs.points().map(|v| v.to_string()).collect();
        writeln!(w, "omega_i\\omega_s,{}", axis.join(","))?;
        for a in 0..gi.n_points() {
            let row: Vec<String> = intensity.row(a).iter().map(|v| v.to_string()).collect();
            writeln!(w, "{},{}", gi.point(a), row.join(","))?;
        }
        Ok(())
    })?;
    out.csv("schmidt.csv", |w| spectrum.write_table(w))?;
    if config.output.write_jsa {
        out.csv("jsa.csv", |w| jsa.write_csv(w))?;
    }
    out.summary(&Results {
        resolved: resolved_info(resolved, numerics),
        data: JsiResults {
            purity: spectrum.purity(),
            schmidt_number: spectrum.schmidt_number(),
            rate_ratio,
            idler_axis: [gi.start(), gi.end()],
            signal_axis: [gs.start(), gs.end()],
            points: gi.n_points(),
        },
    })?;
    Ok(())
}

#[derive(Serialize)]
struct SweepResults {
    #[serde(flatten)]
    summary: SweepSummary,
    eta: Vec<f64>,
    delta_tau: Vec<f64>,
}

pub fn sweep_map(
    config: &RunConfig,
    prov: &Provenance,
    resolved: &Resolved,
    dir: &Path,
) -> Result<()> {
    let plan = config.sweep_plan(prov, resolved)?;
    plan.validate()?;
    let started = Instant::now();
    let result = sweep(&plan, &resolved.source)?;
    log::info!(
        "{} sweep points in {:.2?}",
        result.points.len(),
        started.elapsed()
    );

    let out = OutputDir::create(dir, "sweep", config)?;
    out.csv("sweep.csv", |w| result.write_csv(w))?;
    let summary = result.summary();
    let failed = summary.failed_points.len();
    out.summary(&Results {
        resolved: resolved_info(resolved, &plan.numerics),
        data: SweepResults {
            summary,
            eta: plan.eta.values(),
            delta_tau: plan.delta_tau.values(),
        },
    })?;
    let first = result.failures().next().and_then(|p| p.error.clone());
    partial_failure(failed, result.points.len(), first)
}

/// Per-point failures are recorded in the outputs; the run still exits as a
/// numerical-guard failure so scripts notice.
fn partial_failure(failed: usize, total: usize, first: Option<String>) -> Result<()> {
    if failed == 0 {
        return Ok(());
    }
    Err(CliError::Numerical(format!(
        "{failed} of {total} points failed; first: {}",
        first.unwrap_or_default()
    )))
}

#[derive(Serialize)]
struct FloorResult {
    rate_floor: f64,
    status: &'static str,
    compensating_pulse_energy: Option<f64>,
    report: Option<OptimumReportView>,
}

/// The report without its scan trace, which sweep already covers.
#[derive(Serialize)]
struct OptimumReportView {
    best_eta: f64,
    best_delta_tau: f64,
    best_purity: f64,
    achieved_rate_ratio: f64,
    seed: TracePoint,
    seed_origin: String,
    evaluations: usize,
    converged: bool,
    refine_trace: Vec<TracePoint>,
}

impl From<&OptimumReport> for OptimumReportView {
    fn from(r: &OptimumReport) -> Self {
        Self {
            best_eta: r.best_eta,
            best_delta_tau: r.best_delta_tau,
            best_purity: r.best_purity,
            achieved_rate_ratio: r.achieved_rate_ratio,
            seed: r.seed,
            seed_origin: r.seed_origin.clone(),
            evaluations: r.evaluations,
            converged: r.converged,
            refine_trace: r.refine_trace.clone(),
        }
    }
}

#[derive(Serialize)]
struct TauResult {
    tau_p: f64,
    inverse_tau: f64,
    single_pulse_purity: f64,
    floors: Vec<FloorResult>,
}

#[derive(Serialize)]
struct OptimizeResults {
    phi: f64,
    taus: Vec<TauResult>,
    infeasible: usize,
}

pub fn optimize(
    config: &RunConfig,
    prov: &Provenance,
    resolved: &Resolved,
    dir: &Path,
) -> Result<()> {
    let settings = config.optimize_settings(prov, resolved)?;
    settings.validate()?;
    let taus = config.optimize_taus(prov, resolved)?;
    let floors = &config.optimize.rate_floors;
    let source = &resolved.source;

    let mut results = Vec::with_capacity(taus.len());
    let mut infeasible = 0;
    for &tau_p in &taus {
        let started = Instant::now();
        let reference = Evaluator::new(
            source.with_pump(PumpSpec::single(tau_p)?),
            settings.numerics,
            settings.undefined_below,
        )?;
        let reports = optimize_nested(source, tau_p, floors, &settings)?;
        let mut per_floor = Vec::with_capacity(floors.len());
        for (&rate_floor, report) in floors.iter().zip(reports) {
            per_floor.push(match report {
                Ok(r) => FloorResult {
                    rate_floor,
                    status: "ok",
                    compensating_pulse_energy: compensating_pulse_energy(r.achieved_rate_ratio)
                        .ok(),
                    report: Some((&r).into()),
                },
                Err(Error::Infeasible { .. }) => {
                    infeasible += 1;
                    FloorResult {
                        rate_floor,
                        status: "infeasible",
                        compensating_pulse_energy: None,
                        report: None,
                    }
                }
                Err(e) => return Err(e.into()),
            });
        }
        log::info!(
            "tau_p = {tau_p}: {} floors in {:.2?}",
            floors.len(),
            started.elapsed()
        );
        results.push(TauResult {
            tau_p,
            inverse_tau: 1.0 / tau_p,
            single_pulse_purity: reference.reference().purity,
            floors: per_floor,
        });
    }

    let out = OutputDir::create(dir, "optimize", config)?;
    out.csv("optima.csv", |w| {
        writeln!(
            w,
            "tau_p,inverse_tau,single_pulse_purity,rate_floor,status,eta,delta_tau,purity,rate_ratio,\
             compensating_pulse_energy,seed_origin,evaluations,converged"
        )?;
        for t in &results {
            for f in &t.floors {
                let tail = match &f.report {
                    Some(r) => format!(
                        "{},{},{},{},{},{},{},{}",
                        r.best_eta,
                        r.best_delta_tau,
                        r.best_purity,
                        r.achieved_rate_ratio,
                        f.compensating_pulse_energy.map(|v| v.to_string()).unwrap_or_default(),
                        r.seed_origin,
                        r.evaluations,
                        r.converged
                    ),
                    None => ",,,,,,,".to_string(),
                };
                writeln!(
                    w,
                    "{},{},{},{},{},{tail}",
                    t.tau_p, t.inverse_tau, t.single_pulse_purity, f.rate_floor, f.status
                )?;
            }
        }
        Ok(())
    })?;
    out.summary(&Results {
        resolved: resolved_info(resolved, &settings.numerics),
        data: OptimizeResults {
            phi: settings.phi,
            taus: results,
            infeasible,
        },
    })?;
    if infeasible > 0 {
        return Err(CliError::Infeasible(format!(
            "{infeasible} of {} (tau_p, rate floor) pairs have no feasible point; see {}",
            taus.len() * floors.len(),
            out.path().join("optima.csv").display()
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct SensitivityResults {
    axis: &'static str,
    base_purity: Option<f64>,
    threshold: f64,
    /// In the axis' units: meters, linewidths or radians.
    first_drop_below: Option<f64>,
    failed_points: usize,
}

pub fn sensitivity(
    config: &RunConfig,
    prov: &Provenance,
    resolved: &Resolved,
    dir: &Path,
) -> Result<()> {
    let (axis, numerics) = config.sensitivity_axis(prov, resolved)?;
    let s = &config.sensitivity;
    let evaluator = Evaluator::new(resolved.source, numerics, s.undefined_rate)?;
    let started = Instant::now();
    let curve = sensitivity_scan(&evaluator, &axis)?;
    log::info!(
        "{} sensitivity points in {:.2?}",
        curve.points.len(),
        started.elapsed()
    );

    let out = OutputDir::create(dir, "sensitivity", config)?;
    out.csv("sensitivity.csv", |w| curve.write_csv(w))?;
    let failures: Vec<&str> = curve
        .points
        .iter()
        .filter_map(|p| p.error.as_deref())
        .collect();
    out.summary(&Results {
        resolved: resolved_info(resolved, &numerics),
        data: SensitivityResults {
            axis: match s.axis {
                AxisName::WavelengthShift => "wavelength_shift",
                AxisName::Detuning => "detuning",
                AxisName::Phase => "phase",
            },
            base_purity: curve.base_purity,
            threshold: s.threshold,
            first_drop_below: curve.first_drop_below(s.threshold),
            failed_points: failures.len(),
        },
    })?;
    partial_failure(
        failures.len(),
        curve.points.len(),
        failures.first().map(|e| e.to_string()),
    )
}
