//! Spectrally engineered photon pairs from a nonlinear microring resonator.
//!
//! The crate builds the biphoton joint spectral amplitude (JSA) produced by
//! spontaneous four-wave mixing in a single pump/signal/idler resonance
//! triplet, measures its spectral entanglement through a Schmidt
//! decomposition and searches dual-pulse pump settings that maximize the
//! heralded single-photon purity under pair-rate constraints.
//!
//! All quantities are in units of the pump linewidth Ω = ω₀/Q; [`units`]
//! converts physical inputs.

pub mod biphoton;
pub mod error;
pub mod numerics;
pub mod optimizer;
pub mod schmidt;
pub mod spectral;
pub mod units;

pub use biphoton::{
    build_default_jsa, build_jsa, jsi, relative_rate, JointSpectralAmplitude, RingSource,
};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::{Numerics, TruncationGuard};
pub use optimizer::{
    optimize_constrained, optimize_nested, sensitivity_scan, sweep, AxisRange, Evaluator,
    OptimizeSettings, OptimumReport, PointEvaluation, SensitivityAxis, SensitivityCurve, SweepPlan,
    SweepResult,
};
pub use schmidt::{
    decompose, purity, schmidt_spectrum, SchmidtModes, SchmidtSpectrum, SvdStrategy,
};
pub use spectral::{ComplexSpectrum, FrequencyGrid, PumpShape, PumpSpec, Resonance, TemporalField};
