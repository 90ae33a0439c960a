//! Command-line front end for `ringpair`: reads a TOML run configuration,
//! applies command-line overrides and writes plot-ready CSV and JSON.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod quantity;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Provenance, Resolved, RunConfig};
pub use error::{CliError, Result};
pub use quantity::{Quantity, Unit};

use config::{AxisName, ShapeName};

#[derive(Debug, Parser)]
#[command(
    name = "ringpair",
    version,
    about = "Photon-pair spectra, purity and pump optimization for microring sources"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Incident and in-resonator pump spectra, temporal profile, and the single-pulse reference.
    Spectrum(CommonArgs),
    /// Joint spectral intensity, Schmidt spectrum and purity.
    Jsi(CommonArgs),
    /// Purity and relative rate over a grid of eta and pulse delay.
    Sweep(SweepArgs),
    /// Maximize purity under pair-rate floors.
    Optimize(OptimizeArgs),
    /// Purity versus resonance shift, detuning or phase error.
    Sensitivity(SensitivityArgs),
    /// Print the configuration after overrides, as TOML.
    Config(CommonArgs),
}

/// Flags shared by every command. Each override replaces the config value
/// of the same name.
#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// TOML run configuration; defaults are used when omitted.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory [default: <output.dir>/<command>].
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Fail instead of warning when a spectrum is truncated by its grid.
    #[arg(long)]
    pub strict: bool,
    /// single_gaussian, dual_pulse or target.
    #[arg(long)]
    pub shape: Option<ShapeName>,
    /// e.g. "0.1 /linewidth" or "10 ps".
    #[arg(long, allow_hyphen_values = true)]
    pub tau_p: Option<Quantity>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_tau: Option<Quantity>,
    /// e.g. "1 pi" or "180 deg".
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<Quantity>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<Quantity>,
    #[arg(long)]
    pub wavelength: Option<Quantity>,
    #[arg(long)]
    pub q_loaded: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub detuning: Option<Quantity>,
    /// JSA points per axis, for whichever command runs.
    #[arg(long)]
    pub jsa_points: Option<usize>,
    /// JSA half-width, e.g. "6 linewidths".
    #[arg(long)]
    pub window: Option<Quantity>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub eta_points: Option<usize>,
    #[arg(long)]
    pub delta_tau_points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// R/R0 floor; repeat for several. Replaces optimize.rate_floors.
    #[arg(long = "rate-floor", allow_hyphen_values = true)]
    pub rate_floors: Vec<f64>,
    /// Optimize over the default 1/tau_p grid instead of a single tau_p.
    #[arg(long)]
    pub curve: bool,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// wavelength_shift, detuning or phase.
    #[arg(long)]
    pub axis: Option<AxisName>,
    #[arg(long, allow_hyphen_values = true)]
    pub min: Option<Quantity>,
    #[arg(long, allow_hyphen_values = true)]
    pub max: Option<Quantity>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub threshold: Option<f64>,
}

fn set<T>(slot: &mut T, value: Option<T>, prov: &mut Provenance, key: &str, flag: &str) {
    if let Some(v) = value {
        *slot = v;
        prov.record_override(key, flag);
    }
}

impl CommonArgs {
    fn apply(&self, c: &mut RunConfig, prov: &mut Provenance) {
        if self.strict {
            c.numerics.strict = true;
            prov.record_override("numerics.strict", "--strict");
        }
        set(&mut c.pump.shape, self.shape, prov, "pump.shape", "--shape");
        set(&mut c.pump.tau_p, self.tau_p, prov, "pump.tau_p", "--tau-p");
        set(&mut c.pump.eta, self.eta, prov, "pump.eta", "--eta");
        set(
            &mut c.pump.delta_tau,
            self.delta_tau,
            prov,
            "pump.delta_tau",
            "--delta-tau",
        );
        set(&mut c.pump.phi, self.phi, prov, "pump.phi", "--phi");
        set(&mut c.pump.sigma, self.sigma, prov, "pump.sigma", "--sigma");
        if self.wavelength.is_some() {
            c.resonator.omega0 = None;
        }
        set(
            &mut c.resonator.wavelength,
            self.wavelength.map(Some),
            prov,
            "resonator.wavelength",
            "--wavelength",
        );
        set(
            &mut c.resonator.q_loaded,
            self.q_loaded.map(Some),
            prov,
            "resonator.q_loaded",
            "--q-loaded",
        );
        set(
            &mut c.resonator.detuning,
            self.detuning,
            prov,
            "resonator.detuning",
            "--detuning",
        );
        set(
            &mut c.numerics.window,
            self.window,
            prov,
            "numerics.window",
            "--window",
        );
        set(
            &mut c.numerics.jsa_points,
            self.jsa_points,
            prov,
            "numerics.jsa_points",
            "--jsa-points",
        );
        set(
            &mut c.sweep.jsa_points,
            self.jsa_points,
            prov,
            "sweep.jsa_points",
            "--jsa-points",
        );
        set(
            &mut c.optimize.jsa_points,
            self.jsa_points,
            prov,
            "optimize.jsa_points",
            "--jsa-points",
        );
        set(
            &mut c.sensitivity.jsa_points,
            self.jsa_points,
            prov,
            "sensitivity.jsa_points",
            "--jsa-points",
        );
    }

    /// The config file (or defaults) with every override applied.
    pub fn load(&self) -> Result<(RunConfig, Provenance)> {
        let (mut config, mut prov) = match &self.config {
            Some(path) => config::load(path)?,
            None => (RunConfig::default(), Provenance::defaults()),
        };
        self.apply(&mut config, &mut prov);
        Ok((config, prov))
    }

    fn out_dir(&self, config: &RunConfig, command: &str) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| config.output.dir.join(command))
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Config(args) => {
            let (config, prov) = args.load()?;
            config.resolve(&prov)?;
            print!("{}", config.to_toml());
            Ok(())
        }
        Command::Spectrum(args) => {
            let (config, prov) = args.load()?;
            let resolved = config.resolve(&prov)?;
            commands::spectrum(&config, &resolved, &args.out_dir(&config, "spectrum"))
        }
        Command::Jsi(args) => {
            let (config, prov) = args.load()?;
            let resolved = config.resolve(&prov)?;
            commands::jsi_map(&config, &resolved, &args.out_dir(&config, "jsi"))
        }
        Command::Sweep(args) => {
            let (mut config, mut prov) = args.common.load()?;
            set(
                &mut config.sweep.eta_points,
                args.eta_points,
                &mut prov,
                "sweep.eta_points",
                "--eta-points",
            );
            set(
                &mut config.sweep.delta_tau_points,
                args.delta_tau_points,
                &mut prov,
                "sweep.delta_tau_points",
                "--delta-tau-points",
            );
            let resolved = config.resolve(&prov)?;
            commands::sweep_map(
                &config,
                &prov,
                &resolved,
                &args.common.out_dir(&config, "sweep"),
            )
        }
        Command::Optimize(args) => {
            let (mut config, mut prov) = args.common.load()?;
            let floors = (!args.rate_floors.is_empty()).then(|| args.rate_floors.clone());
            set(
                &mut config.optimize.rate_floors,
                floors,
                &mut prov,
                "optimize.rate_floors",
                "--rate-floor",
            );
            if args.curve {
                config.optimize.curve = true;
                config.optimize.tau_p_values.clear();
                prov.record_override("optimize.curve", "--curve");
            }
            let resolved = config.resolve(&prov)?;
            commands::optimize(
                &config,
                &prov,
                &resolved,
                &args.common.out_dir(&config, "optimize"),
            )
        }
        Command::Sensitivity(args) => {
            let (mut config, mut prov) = args.common.load()?;
            let s = &mut config.sensitivity;
            set(
                &mut s.axis,
                args.axis,
                &mut prov,
                "sensitivity.axis",
                "--axis",
            );
            set(&mut s.min, args.min, &mut prov, "sensitivity.min", "--min");
            set(&mut s.max, args.max, &mut prov, "sensitivity.max", "--max");
            set(
                &mut s.points,
                args.points,
                &mut prov,
                "sensitivity.points",
                "--points",
            );
            set(
                &mut s.threshold,
                args.threshold,
                &mut prov,
                "sensitivity.threshold",
                "--threshold",
            );
            let resolved = config.resolve(&prov)?;
            commands::sensitivity(
                &config,
                &prov,
                &resolved,
                &args.common.out_dir(&config, "sensitivity"),
            )
        }
    }
}
