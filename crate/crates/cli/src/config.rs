//! Run configuration: a TOML file whose physical values carry unit suffixes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ringpair::biphoton::RingSource;
use ringpair::optimizer::{
    default_inverse_tau_grid, AxisRange, NelderMeadSettings, OptimizeSettings, SensitivityAxis,
    SweepPlan, DEFAULT_UNDEFINED_RATE,
};
use ringpair::spectral::{PumpShape, PumpSpec, Resonance};
use ringpair::units::Normalization;
use ringpair::{Numerics, TruncationGuard};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::quantity::{Quantity, Unit};

fn q(value: f64, unit: Unit) -> Quantity {
    Quantity::new(value, unit)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub resonator: ResonatorSection,
    pub pump: PumpSection,
    pub numerics: NumericsSection,
    pub sweep: SweepSection,
    pub optimize: OptimizeSection,
    pub sensitivity: SensitivitySection,
    pub output: OutputSection,
}

/// All three resonances share one loaded Q unless `signal_q`/`idler_q` are
/// given. Without `q_loaded` and a wavelength (or `omega0`) only normalized
/// units are accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResonatorSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavelength: Option<Quantity>,
    /// Resonance angular frequency, in rad/s.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_loaded: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signal_q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idler_q: Option<f64>,
    /// Shift of the whole ring: linewidths, rad/s, or a wavelength shift.
    pub detuning: Quantity,
}

impl Default for ResonatorSection {
    fn default() -> Self {
        Self {
            wavelength: Some(q(1550.0, Unit::Nanometer)),
            omega0: None,
            q_loaded: Some(5e4),
            signal_q: None,
            idler_q: None,
            detuning: q(0.0, Unit::Linewidth),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeName {
    SingleGaussian,
    DualPulse,
    Target,
}

impl std::str::FromStr for ShapeName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "single_gaussian" => Ok(Self::SingleGaussian),
            "dual_pulse" => Ok(Self::DualPulse),
            "target" => Ok(Self::Target),
            _ => Err(format!(
                "unknown pump shape '{s}'; expected single_gaussian, dual_pulse or target"
            )),
        }
    }
}

/// Only the fields of the selected shape are used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PumpSection {
    pub shape: ShapeName,
    pub tau_p: Quantity,
    pub eta: f64,
    pub delta_tau: Quantity,
    pub phi: Quantity,
    /// Target bandwidth.
    pub sigma: Quantity,
    /// In units of the normalized pulse energy.
    pub pulse_energy: f64,
    pub normalize_energy: bool,
}

impl Default for PumpSection {
    fn default() -> Self {
        Self {
            shape: ShapeName::DualPulse,
            tau_p: q(0.1, Unit::PerLinewidth),
            eta: 0.55,
            delta_tau: q(0.2, Unit::PerLinewidth),
            phi: q(1.0, Unit::Pi),
            sigma: q(1.0, Unit::PerTauP),
            pulse_energy: 1.0,
            normalize_energy: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsSection {
    pub jsa_points: usize,
    /// Half-width of each JSA axis.
    pub window: Quantity,
    pub pump_min_points: usize,
    pub pump_max_spacing: Quantity,
    pub pump_min_half_width: Quantity,
    /// Pump grids reach at least this many 1/τ_p.
    pub pump_pulse_widths: f64,
    /// Largest edge magnitude of the in-resonator field relative to its peak.
    pub edge_tolerance: f64,
    /// Fail on truncated spectra instead of warning.
    pub strict: bool,
    pub truncated_svd: bool,
}

impl Default for NumericsSection {
    fn default() -> Self {
        let n = Numerics::default();
        Self {
            jsa_points: n.jsa_points,
            window: q(n.jsa_window, Unit::Linewidth),
            pump_min_points: n.pump_min_points,
            pump_max_spacing: q(n.pump_max_spacing, Unit::Linewidth),
            pump_min_half_width: q(n.pump_min_half_width, Unit::Linewidth),
            pump_pulse_widths: n.pump_pulse_widths,
            edge_tolerance: n.guard.tolerance,
            strict: n.guard.strict,
            truncated_svd: n.truncated_svd,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub eta_min: f64,
    pub eta_max: f64,
    pub eta_points: usize,
    pub delta_tau_min: Quantity,
    pub delta_tau_max: Quantity,
    pub delta_tau_points: usize,
    pub jsa_points: usize,
    /// R/R0 below which purity is reported as undefined.
    pub undefined_rate: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            eta_min: 0.0,
            eta_max: 1.0,
            eta_points: 21,
            delta_tau_min: q(-2.0, Unit::PerLinewidth),
            delta_tau_max: q(2.0, Unit::PerLinewidth),
            delta_tau_points: 41,
            jsa_points: 128,
            undefined_rate: DEFAULT_UNDEFINED_RATE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizeSection {
    pub rate_floors: Vec<f64>,
    /// Pulse durations to optimize at; empty means the pump's `tau_p`.
    pub tau_p_values: Vec<Quantity>,
    /// Use 25 log-spaced values of 1/(τ_pΩ) from 0.5 to 20 instead.
    pub curve: bool,
    pub eta_points: usize,
    pub delta_tau_min: Quantity,
    pub delta_tau_max: Quantity,
    pub delta_tau_points: usize,
    pub max_evaluations: usize,
    pub jsa_points: usize,
    pub undefined_rate: f64,
}

impl Default for OptimizeSection {
    fn default() -> Self {
        Self {
            rate_floors: vec![0.0, 0.2, 0.5],
            tau_p_values: Vec::new(),
            curve: false,
            eta_points: 41,
            delta_tau_min: q(-2.0, Unit::PerLinewidth),
            delta_tau_max: q(2.0, Unit::PerLinewidth),
            delta_tau_points: 41,
            max_evaluations: NelderMeadSettings::default().max_evaluations,
            jsa_points: 128,
            undefined_rate: DEFAULT_UNDEFINED_RATE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    WavelengthShift,
    Detuning,
    Phase,
}

impl std::str::FromStr for AxisName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "wavelength_shift" => Ok(Self::WavelengthShift),
            "detuning" => Ok(Self::Detuning),
            "phase" => Ok(Self::Phase),
            _ => Err(format!(
                "unknown axis '{s}'; expected wavelength_shift, detuning or phase"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SensitivitySection {
    pub axis: AxisName,
    pub min: Quantity,
    pub max: Quantity,
    pub points: usize,
    /// Report where purity first falls below this value.
    pub threshold: f64,
    pub jsa_points: usize,
    pub undefined_rate: f64,
}

impl Default for SensitivitySection {
    fn default() -> Self {
        Self {
            axis: AxisName::WavelengthShift,
            min: q(-80.0, Unit::Picometer),
            max: q(80.0, Unit::Picometer),
            points: 161,
            threshold: 0.95,
            jsa_points: 128,
            undefined_rate: DEFAULT_UNDEFINED_RATE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Each command writes into `<dir>/<command>` unless `--out` is given.
    pub dir: PathBuf,
    /// Also write the complex JSA (`jsi` only).
    pub write_jsa: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("ringpair-out"),
            write_jsa: false,
        }
    }
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config always serializes")
    }
}

/// Where each value came from, so errors can point at a line or a flag.
#[derive(Debug, Clone, Default)]
pub struct Provenance {
    name: String,
    text: String,
    /// Dotted key → command-line flag that set it.
    overrides: BTreeMap<String, String>,
}

impl Provenance {
    pub fn defaults() -> Self {
        Self {
            name: "(defaults)".to_string(),
            ..Self::default()
        }
    }

    pub fn record_override(&mut self, key: &str, flag: &str) {
        self.overrides.insert(key.to_string(), flag.to_string());
    }

    /// `file:line:column` of `key`, the flag that overrode it, or a note
    /// that it kept its default.
    pub fn locate(&self, key: &str) -> String {
        if let Some(flag) = self.overrides.get(key) {
            return format!("command line {flag}");
        }
        match key_offset(&self.text, key) {
            Some(offset) => {
                let before = &self.text[..offset];
                let line = before.matches('\n').count() + 1;
                let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
                format!("{}:{line}:{column}", self.name)
            }
            None => format!("{} (default value)", self.name),
        }
    }

    /// Error constructor for `map_err`.
    pub fn at<'a>(&'a self, key: &'a str) -> impl Fn(String) -> CliError + 'a {
        move |m| self.error(key, m)
    }

    pub fn error(&self, key: &str, message: impl Into<String>) -> CliError {
        CliError::Config {
            location: self.locate(key),
            key: key.to_string(),
            message: message.into(),
        }
    }
}

fn key_offset(text: &str, key: &str) -> Option<usize> {
    let doc = toml::de::DeTable::parse(text).ok()?;
    let mut table = doc.get_ref();
    let mut parts = key.split('.').peekable();
    while let Some(part) = parts.next() {
        let (_, value) = table.iter().find(|(k, _)| k.get_ref().as_ref() == part)?;
        if parts.peek().is_none() {
            return Some(value.span().start);
        }
        table = value.get_ref().as_table()?;
    }
    None
}

/// Parse a config file. Syntax and type errors carry toml's own line and
/// column; unknown keys are rejected.
pub fn load(path: &Path) -> Result<(RunConfig, Provenance)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let name = path.display().to_string();
    let config = parse(&text, &name)?;
    Ok((
        config,
        Provenance {
            name,
            text,
            overrides: BTreeMap::new(),
        },
    ))
}

pub fn parse(text: &str, name: &str) -> Result<RunConfig> {
    toml::from_str(text).map_err(|e: toml::de::Error| CliError::Parse {
        path: name.to_string(),
        message: e.to_string().trim_end().to_string(),
    })
}

/// Everything a command needs, in normalized units.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub normalization: Option<Normalization>,
    pub source: RingSource,
    pub numerics: Numerics,
}

type Check<T> = std::result::Result<T, String>;

impl RunConfig {
    pub fn resolve(&self, prov: &Provenance) -> Result<Resolved> {
        let r = &self.resonator;

        let physical = match (&r.wavelength, &r.omega0) {
            (Some(_), Some(_)) => {
                return Err(prov.error(
                    "resonator.omega0",
                    "give either wavelength or omega0, not both",
                ))
            }
            (Some(w), None) => Some((
                "resonator.wavelength",
                w.length().map_err(prov.at("resonator.wavelength"))?,
                true,
            )),
            (None, Some(o)) => match o.unit {
                Unit::RadPerSecond => Some(("resonator.omega0", o.value, false)),
                _ => return Err(prov.error("resonator.omega0", format!("'{o}' must be in rad/s"))),
            },
            (None, None) => None,
        };
        let q_loaded = r
            .q_loaded
            .map(|v| positive(v).map_err(prov.at("resonator.q_loaded")))
            .transpose()?;
        let normalization = match (physical, q_loaded) {
            (Some((key, value, is_wavelength)), Some(q)) => Some(
                if is_wavelength {
                    Normalization::from_wavelength(value, q)
                } else {
                    Normalization::from_resonance(value, q)
                }
                .map_err(|e| prov.error(key, e.to_string()))?,
            ),
            (Some((key, _, _)), None) => {
                return Err(prov.error(key, "needs resonator.q_loaded as well"))
            }
            (None, Some(_)) => {
                return Err(prov.error(
                    "resonator.q_loaded",
                    "needs resonator.wavelength or resonator.omega0 as well",
                ))
            }
            (None, None) => None,
        };
        let norm = normalization.as_ref();

        let pump_res = match q_loaded {
            Some(q) => Resonance::normalized(q)?,
            None => Resonance::unit(),
        };
        let sideband = |key: &str, value: Option<f64>| -> Result<Resonance> {
            match (value, q_loaded) {
                (None, _) => Ok(pump_res),
                (Some(_), None) => Err(prov.error(key, "needs resonator.q_loaded")),
                // same normalized ω₀ as the pump, so only the linewidth changes
                (Some(v), Some(qp)) => Ok(Resonance::new(qp, positive(v).map_err(prov.at(key))?)?),
            }
        };
        let signal_res = sideband("resonator.signal_q", r.signal_q)?;
        let idler_res = sideband("resonator.idler_q", r.idler_q)?;
        let detuning = match r.detuning.unit.is_length() {
            true => {
                let n = norm.ok_or_else(|| {
                    prov.error(
                        "resonator.detuning",
                        "a wavelength shift needs a physical resonator",
                    )
                })?;
                n.wavelength_shift(r.detuning.length().map_err(prov.at("resonator.detuning"))?)
            }
            false => r
                .detuning
                .frequency(norm)
                .map_err(prov.at("resonator.detuning"))?,
        };

        let pump = self.resolve_pump(prov, norm)?;
        let mut source = RingSource {
            pump_res,
            signal_res,
            idler_res,
            pump,
            pump_energy_norm: self.pump.normalize_energy,
            pulse_energy: non_negative(self.pump.pulse_energy)
                .map_err(prov.at("pump.pulse_energy"))?,
        };
        if detuning != 0.0 {
            source = source.with_detuning(detuning);
        }

        let n = &self.numerics;
        let numerics = Numerics {
            jsa_points: points(n.jsa_points).map_err(prov.at("numerics.jsa_points"))?,
            jsa_window: n
                .window
                .linewidths()
                .and_then(positive)
                .map_err(prov.at("numerics.window"))?,
            pump_min_points: points(n.pump_min_points)
                .map_err(prov.at("numerics.pump_min_points"))?,
            pump_max_spacing: n
                .pump_max_spacing
                .linewidths()
                .and_then(positive)
                .map_err(prov.at("numerics.pump_max_spacing"))?,
            pump_min_half_width: n
                .pump_min_half_width
                .linewidths()
                .and_then(positive)
                .map_err(prov.at("numerics.pump_min_half_width"))?,
            pump_pulse_widths: positive(n.pump_pulse_widths)
                .map_err(prov.at("numerics.pump_pulse_widths"))?,
            guard: TruncationGuard {
                tolerance: positive(n.edge_tolerance)
                    .map_err(prov.at("numerics.edge_tolerance"))?,
                strict: n.strict,
            },
            truncated_svd: n.truncated_svd,
        };
        Ok(Resolved {
            normalization,
            source,
            numerics,
        })
    }

    fn resolve_pump(&self, prov: &Provenance, norm: Option<&Normalization>) -> Result<PumpSpec> {
        let p = &self.pump;
        let tau_p = p
            .tau_p
            .time(norm)
            .and_then(positive)
            .map_err(prov.at("pump.tau_p"))?;
        let shape = match p.shape {
            ShapeName::SingleGaussian => PumpShape::SingleGaussian,
            ShapeName::DualPulse => PumpShape::DualPulse {
                eta: unit_interval(p.eta).map_err(prov.at("pump.eta"))?,
                delta_tau: p.delta_tau.time(norm).map_err(prov.at("pump.delta_tau"))?,
                phi: p.phi.phase().map_err(prov.at("pump.phi"))?,
            },
            ShapeName::Target => PumpShape::Target {
                sigma: p
                    .sigma
                    .bandwidth(tau_p, norm)
                    .and_then(positive)
                    .map_err(prov.at("pump.sigma"))?,
            },
        };
        PumpSpec::new(tau_p, shape).map_err(|e| prov.error("pump", e.to_string()))
    }

    pub fn sweep_plan(&self, prov: &Provenance, resolved: &Resolved) -> Result<SweepPlan> {
        let s = &self.sweep;
        let norm = resolved.normalization.as_ref();
        let eta = AxisRange {
            min: unit_interval(s.eta_min).map_err(prov.at("sweep.eta_min"))?,
            max: unit_interval(s.eta_max).map_err(prov.at("sweep.eta_max"))?,
            n: points(s.eta_points).map_err(prov.at("sweep.eta_points"))?,
        };
        let delta_tau = AxisRange {
            min: s
                .delta_tau_min
                .time(norm)
                .map_err(prov.at("sweep.delta_tau_min"))?,
            max: s
                .delta_tau_max
                .time(norm)
                .map_err(prov.at("sweep.delta_tau_max"))?,
            n: points(s.delta_tau_points).map_err(prov.at("sweep.delta_tau_points"))?,
        };
        ordered(&eta).map_err(prov.at("sweep.eta_max"))?;
        ordered(&delta_tau).map_err(prov.at("sweep.delta_tau_max"))?;
        Ok(SweepPlan {
            eta,
            delta_tau,
            tau_p: resolved.source.pump.tau_p(),
            phi: self.pump.phi.phase().map_err(prov.at("pump.phi"))?,
            numerics: Numerics {
                jsa_points: points(s.jsa_points).map_err(prov.at("sweep.jsa_points"))?,
                ..resolved.numerics
            },
            undefined_below: non_negative(s.undefined_rate)
                .map_err(prov.at("sweep.undefined_rate"))?,
        })
    }

    pub fn optimize_settings(
        &self,
        prov: &Provenance,
        resolved: &Resolved,
    ) -> Result<OptimizeSettings> {
        let o = &self.optimize;
        let norm = resolved.normalization.as_ref();
        let scan_delta_tau = AxisRange {
            min: o
                .delta_tau_min
                .time(norm)
                .map_err(prov.at("optimize.delta_tau_min"))?,
            max: o
                .delta_tau_max
                .time(norm)
                .map_err(prov.at("optimize.delta_tau_max"))?,
            n: points(o.delta_tau_points).map_err(prov.at("optimize.delta_tau_points"))?,
        };
        ordered(&scan_delta_tau).map_err(prov.at("optimize.delta_tau_max"))?;
        if o.max_evaluations == 0 {
            return Err(prov.error("optimize.max_evaluations", "must be positive"));
        }
        let defaults = OptimizeSettings::default();
        Ok(OptimizeSettings {
            scan_eta: AxisRange {
                min: 0.0,
                max: 1.0,
                n: points(o.eta_points).map_err(prov.at("optimize.eta_points"))?,
            },
            scan_delta_tau,
            phi: self.pump.phi.phase().map_err(prov.at("pump.phi"))?,
            refine: NelderMeadSettings {
                max_evaluations: o.max_evaluations,
                ..defaults.refine
            },
            numerics: Numerics {
                jsa_points: points(o.jsa_points).map_err(prov.at("optimize.jsa_points"))?,
                ..resolved.numerics
            },
            undefined_below: non_negative(o.undefined_rate)
                .map_err(prov.at("optimize.undefined_rate"))?,
            ..defaults
        })
    }

    /// τ_pΩ values to optimize at.
    pub fn optimize_taus(&self, prov: &Provenance, resolved: &Resolved) -> Result<Vec<f64>> {
        let o = &self.optimize;
        for (k, floor) in o.rate_floors.iter().enumerate() {
            if !(floor.is_finite() && *floor >= 0.0) {
                return Err(prov.error(
                    "optimize.rate_floors",
                    format!("entry {} = {floor} must be >= 0", k + 1),
                ));
            }
        }
        if o.rate_floors.is_empty() {
            return Err(prov.error("optimize.rate_floors", "needs at least one floor"));
        }
        if o.curve {
            if !o.tau_p_values.is_empty() {
                return Err(prov.error(
                    "optimize.curve",
                    "curve = true replaces tau_p_values; give only one",
                ));
            }
            return Ok(default_inverse_tau_grid()
                .into_iter()
                .map(|inv| 1.0 / inv)
                .collect());
        }
        if o.tau_p_values.is_empty() {
            return Ok(vec![resolved.source.pump.tau_p()]);
        }
        let norm = resolved.normalization.as_ref();
        o.tau_p_values
            .iter()
            .map(|t| {
                t.time(norm)
                    .and_then(positive)
                    .map_err(|m| prov.error("optimize.tau_p_values", m))
            })
            .collect()
    }

    pub fn sensitivity_axis(
        &self,
        prov: &Provenance,
        resolved: &Resolved,
    ) -> Result<(SensitivityAxis, Numerics)> {
        let s = &self.sensitivity;
        let norm = resolved.normalization.as_ref();
        let convert = |value: &Quantity| -> Check<f64> {
            match s.axis {
                AxisName::WavelengthShift => value.length(),
                AxisName::Detuning => value.frequency(norm),
                AxisName::Phase => value.phase(),
            }
        };
        let range = AxisRange {
            min: convert(&s.min).map_err(prov.at("sensitivity.min"))?,
            max: convert(&s.max).map_err(prov.at("sensitivity.max"))?,
            n: points(s.points).map_err(prov.at("sensitivity.points"))?,
        };
        ordered(&range).map_err(prov.at("sensitivity.max"))?;
        if !(s.threshold.is_finite() && (0.0..=1.0).contains(&s.threshold)) {
            return Err(prov.error(
                "sensitivity.threshold",
                format!("{} must lie in [0, 1]", s.threshold),
            ));
        }
        let values = range.values();
        let axis = match s.axis {
            AxisName::WavelengthShift => SensitivityAxis::WavelengthShift {
                normalization: resolved.normalization.ok_or_else(|| {
                    prov.error(
                        "sensitivity.axis",
                        "wavelength shifts need resonator.wavelength and resonator.q_loaded",
                    )
                })?,
                shifts: values,
            },
            AxisName::Detuning => SensitivityAxis::Detuning { values },
            AxisName::Phase => {
                if self.pump.shape != ShapeName::DualPulse {
                    return Err(prov.error(
                        "sensitivity.axis",
                        "a phase scan needs pump.shape = \"dual_pulse\"",
                    ));
                }
                SensitivityAxis::PhaseDeviation { values }
            }
        };
        let numerics = Numerics {
            jsa_points: points(s.jsa_points).map_err(prov.at("sensitivity.jsa_points"))?,
            ..resolved.numerics
        };
        Ok((axis, numerics))
    }
}

fn positive(v: f64) -> Check<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be positive"))
    }
}

fn non_negative(v: f64) -> Check<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be non-negative"))
    }
}

fn unit_interval(v: f64) -> Check<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} must lie in [0, 1]"))
    }
}

fn points(n: usize) -> Check<usize> {
    if n >= 2 {
        Ok(n)
    } else {
        Err(format!("{n} points is too few; need at least 2"))
    }
}

fn ordered(range: &AxisRange) -> Check<()> {
    if range.max > range.min {
        Ok(())
    } else {
        Err(format!("range [{}, {}] is empty", range.min, range.max))
    }
}
