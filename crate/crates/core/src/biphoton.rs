//! Discretized joint spectral amplitude
//! A(ω_i, ω_s) ∝ F_p(ω_i + ω_s)·l_i(ω_i)·l_s(ω_s) and quantities derived
//! from it.

use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::numerics::Numerics;
use crate::spectral::{
    self, pump_envelope_with_resonance, ComplexSpectrum, FrequencyGrid, PumpShape, PumpSpec,
    Resonance,
};

/// A microring pumped in one resonance and emitting pairs into two
/// symmetrically placed signal and idler resonances.
///
/// Signal and idler frequencies are measured from their nominal resonance
/// centers, which satisfy 2ω_p0 = ω_s0 + ω_i0, so energy conservation is
/// carried entirely by the argument ω_i + ω_s of F_p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingSource {
    pub pump_res: Resonance,
    pub signal_res: Resonance,
    pub idler_res: Resonance,
    pub pump: PumpSpec,
    /// Scale the incident pulse to unit energy (times `pulse_energy`).
    ///
    /// For Gaussian-based shapes the unit-energy object is the constituent
    /// Gaussian pulse exp(−τ_p²ω²/2) before it is split into the weights √η
    /// and √(1−η); the interfered envelope carries whatever energy the
    /// interference leaves. Target pumps are normalized on their own envelope.
    pub pump_energy_norm: bool,
    /// Incident pulse energy in units of the normalized pulse.
    pub pulse_energy: f64,
}

impl RingSource {
    /// Three identical resonances, unit pulse energy.
    pub fn new(res: Resonance, pump: PumpSpec) -> Self {
        Self {
            pump_res: res,
            signal_res: res,
            idler_res: res,
            pump,
            pump_energy_norm: true,
            pulse_energy: 1.0,
        }
    }

    pub fn with_pump(&self, pump: PumpSpec) -> Self {
        Self { pump, ..*self }
    }

    pub fn with_pulse_energy(&self, pulse_energy: f64) -> Self {
        Self {
            pulse_energy,
            ..*self
        }
    }

    /// Shift all three resonances by `detuning` (a drift of the whole ring).
    pub fn with_detuning(&self, detuning: f64) -> Self {
        Self {
            pump_res: self.pump_res.with_detuning(detuning),
            signal_res: self.signal_res.with_detuning(detuning),
            idler_res: self.idler_res.with_detuning(detuning),
            ..*self
        }
    }

    /// The R₀ reference: a single Gaussian pulse with the same τ_p and unit
    /// incident energy.
    pub fn single_pulse_reference(&self) -> Result<Self> {
        Ok(Self {
            pump: PumpSpec::single(self.pump.tau_p())?,
            pump_energy_norm: true,
            pulse_energy: 1.0,
            ..*self
        })
    }

    fn amplitude_scale(&self) -> f64 {
        let energy = self.pulse_energy.sqrt();
        if !self.pump_energy_norm {
            return energy;
        }
        let reference_energy = match self.pump.shape() {
            // ∫exp(−τ²ω²)dω
            PumpShape::SingleGaussian | PumpShape::DualPulse { .. } => {
                PI.sqrt() / self.pump.tau_p()
            }
            // ∫(γ² + (ω−δ)²)exp(−ω²/σ²)dω
            PumpShape::Target { sigma } => {
                let gamma = 0.5 * self.pump_res.linewidth();
                let delta = self.pump_res.detuning();
                PI.sqrt() * sigma * (gamma * gamma + delta * delta + 0.5 * sigma * sigma)
            }
        };
        energy / reference_energy.sqrt()
    }

    /// Incident envelope α_p, scaled per `pump_energy_norm` and `pulse_energy`.
    pub fn incident_envelope(&self, grid: &FrequencyGrid) -> Result<ComplexSpectrum> {
        ensure_finite(self.pulse_energy, "pulse_energy")?;
        if self.pulse_energy < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "pulse_energy must be non-negative, got {}",
                self.pulse_energy
            )));
        }
        let envelope = pump_envelope_with_resonance(grid, &self.pump, &self.pump_res)?;
        Ok(envelope.scaled(Complex64::new(self.amplitude_scale(), 0.0)))
    }

    /// A_p = α_p·l_p.
    pub fn in_resonator_field(&self, grid: &FrequencyGrid) -> Result<ComplexSpectrum> {
        spectral::in_resonator_field(&self.incident_envelope(grid)?, &self.pump_res)
    }

    /// ±window·Ω around each (possibly shifted) sideband resonance.
    pub fn default_grids(&self, numerics: &Numerics) -> Result<(FrequencyGrid, FrequencyGrid)> {
        let half_width = numerics.jsa_window * self.pump_res.linewidth();
        let idler = FrequencyGrid::new(self.idler_res.detuning(), half_width, numerics.jsa_points)?;
        let signal =
            FrequencyGrid::new(self.signal_res.detuning(), half_width, numerics.jsa_points)?;
        Ok((idler, signal))
    }
}

/// Complex matrix A[a][b] = A(ω_i,a, ω_s,b), rows indexed by idler frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectralAmplitude {
    idler_grid: FrequencyGrid,
    signal_grid: FrequencyGrid,
    values: Vec<Complex64>,
    norm_sq: f64,
}

impl JointSpectralAmplitude {
    /// Row-major values, `idler.n_points() × signal.n_points()`.
    pub fn new(
        idler_grid: FrequencyGrid,
        signal_grid: FrequencyGrid,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        let expected = idler_grid.n_points() * signal_grid.n_points();
        if values.len() != expected {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}×{} joint spectrum",
                values.len(),
                idler_grid.n_points(),
                signal_grid.n_points()
            )));
        }
        let norm_sq = weighted_norm_sq(&values, &idler_grid, &signal_grid);
        Ok(Self {
            idler_grid,
            signal_grid,
            values,
            norm_sq,
        })
    }

    pub fn idler_grid(&self) -> &FrequencyGrid {
        &self.idler_grid
    }

    pub fn signal_grid(&self) -> &FrequencyGrid {
        &self.signal_grid
    }

    pub fn n_idler(&self) -> usize {
        self.idler_grid.n_points()
    }

    pub fn n_signal(&self) -> usize {
        self.signal_grid.n_points()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, idler: usize, signal: usize) -> Complex64 {
        self.values[idler * self.n_signal() + signal]
    }

    pub fn row(&self, idler: usize) -> &[Complex64] {
        let n = self.n_signal();
        &self.values[idler * n..(idler + 1) * n]
    }

    /// ΣΣ|A|²·dω_i·dω_s, proportional to the pair probability per pulse.
    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn recomputed_norm_sq(&self) -> f64 {
        weighted_norm_sq(&self.values, &self.idler_grid, &self.signal_grid)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let values = self.values.iter().map(|v| v * factor).collect();
        Self::new(self.idler_grid, self.signal_grid, values).expect("same shape")
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// CSV export: `#` header lines with grid metadata, then one row per
    /// idler frequency holding the real parts of the row followed by the
    /// imaginary parts.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "# joint spectral amplitude, rows = idler, columns = signal"
        )?;
        write_grid_comment(&mut w, "idler_grid", &self.idler_grid)?;
        write_grid_comment(&mut w, "signal_grid", &self.signal_grid)?;
        writeln!(w, "# norm_sq = {}", self.norm_sq)?;
        let n = self.n_signal();
        let header: Vec<String> = (0..n)
            .map(|b| format!("re_{b}"))
            .chain((0..n).map(|b| format!("im_{b}")))
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for a in 0..self.n_idler() {
            let row = self.row(a);
            let fields: Vec<String> = row
                .iter()
                .map(|v| v.re.to_string())
                .chain(row.iter().map(|v| v.im.to_string()))
                .collect();
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer(w, &JsaFile::from(self))?;
        Ok(())
    }

    pub fn read_json<R: Read>(r: R) -> Result<Self> {
        let file: JsaFile = serde_json::from_reader(r)?;
        file.try_into()
    }
}

fn write_grid_comment<W: Write>(w: &mut W, name: &str, grid: &FrequencyGrid) -> Result<()> {
    writeln!(
        w,
        "# {name}: center_offset = {}, half_width = {}, n_points = {}",
        grid.center_offset(),
        grid.half_width(),
        grid.n_points()
    )?;
    Ok(())
}

/// JSON layout of an exported JSA.
#[derive(Debug, Serialize, Deserialize)]
struct JsaFile {
    idler_grid: FrequencyGrid,
    signal_grid: FrequencyGrid,
    norm_sq: f64,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl From<&JointSpectralAmplitude> for JsaFile {
    fn from(jsa: &JointSpectralAmplitude) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..jsa.n_idler())
                .map(|a| jsa.row(a).iter().map(f).collect())
                .collect()
        };
        Self {
            idler_grid: jsa.idler_grid,
            signal_grid: jsa.signal_grid,
            norm_sq: jsa.norm_sq,
            re: rows(|v| v.re),
            im: rows(|v| v.im),
        }
    }
}

impl TryFrom<JsaFile> for JointSpectralAmplitude {
    type Error = Error;

    fn try_from(file: JsaFile) -> Result<Self> {
        if file.re.len() != file.idler_grid.n_points() || file.im.len() != file.re.len() {
            return Err(Error::GridMismatch(
                "row count does not match the idler grid".to_string(),
            ));
        }
        let mut values =
            Vec::with_capacity(file.idler_grid.n_points() * file.signal_grid.n_points());
        for (re, im) in file.re.iter().zip(&file.im) {
            if re.len() != file.signal_grid.n_points() || im.len() != re.len() {
                return Err(Error::GridMismatch(
                    "column count does not match the signal grid".to_string(),
                ));
            }
            values.extend(re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)));
        }
        Self::new(file.idler_grid, file.signal_grid, values)
    }
}

fn weighted_norm_sq(values: &[Complex64], idler: &FrequencyGrid, signal: &FrequencyGrid) -> f64 {
    // fixed row-major order keeps the sum bit-reproducible
    let mut sum = 0.0;
    for v in values {
        sum += v.norm_sqr();
    }
    sum * idler.spacing() * signal.spacing()
}

/// F_p, either on a lattice aligned with the JSA grids (every ω_i + ω_s is
/// a lattice node) or interpolated linearly.
enum PumpConvolution {
    Aligned {
        lattice: ComplexSpectrum,
        offset: usize,
        step: usize,
        n: usize,
    },
    Interpolated(ComplexSpectrum),
}

impl PumpConvolution {
    fn new(
        source: &RingSource,
        idler: &FrequencyGrid,
        signal: &FrequencyGrid,
        numerics: &Numerics,
    ) -> Result<Self> {
        let linewidth = source.pump_res.linewidth();
        let max_spacing = numerics.pump_max_spacing * linewidth;
        let reach = spectral::pump_half_width(&source.pump, &source.pump_res, numerics);
        let min_half = (numerics.pump_min_points.max(2) - 1).div_ceil(2);

        let d = idler.spacing();
        let aligned =
            idler.n_points() == signal.n_points() && ((signal.spacing() - d) / d).abs() < 1e-12;
        if aligned {
            let n = idler.n_points();
            let step = (d / max_spacing).ceil().max(1.0) as usize;
            let h = d / step as f64;
            let center = 0.5 * (idler.center_offset() + signal.center_offset());
            let half_count = ((reach + center.abs()) / h)
                .ceil()
                .max(((n - 1) * step).div_ceil(2) as f64) as usize;
            let half_count = half_count.max(min_half);
            let grid = FrequencyGrid::from_spacing(center, h, half_count)?;
            let field = source.in_resonator_field(&grid)?;
            let lattice = spectral::self_convolution_lattice(&field, &numerics.guard)?;
            // ω_i,a + ω_s,b = (c_i + c_s) + (a + b − (n−1))·d, lattice node 2·half_count + (a + b − (n−1))·step
            let offset = 2 * half_count - (n - 1) * step;
            Ok(Self::Aligned {
                lattice,
                offset,
                step,
                n,
            })
        } else {
            let grid = FrequencyGrid::for_pump(&source.pump, &source.pump_res, numerics)?;
            let field = source.in_resonator_field(&grid)?;
            let lattice = spectral::self_convolution_lattice(&field, &numerics.guard)?;
            let required = (idler.start() + signal.start(), idler.end() + signal.end());
            let available = (lattice.grid().start(), lattice.grid().end());
            let slack = 1e-9 * lattice.grid().spacing();
            if required.0 < available.0 - slack || required.1 > available.1 + slack {
                return Err(Error::Coverage {
                    required,
                    available,
                });
            }
            Ok(Self::Interpolated(lattice))
        }
    }

    fn at(&self, a: usize, b: usize, omega_sum: f64) -> Complex64 {
        match self {
            Self::Aligned {
                lattice,
                offset,
                step,
                n,
            } => {
                debug_assert!(a < *n && b < *n);
                lattice.values()[offset + (a + b) * step]
            }
            Self::Interpolated(lattice) => lattice
                .sample(omega_sum)
                .expect("coverage checked at construction"),
        }
    }
}

/// Build A(ω_i, ω_s) = F_p(ω_i + ω_s)·l_i(ω_i)·l_s(ω_s) on the given grids.
///
/// F_p is the self-convolution of the (normalized) in-resonator pump field.
/// When both grids share size and spacing the pump lattice is aligned so no
/// interpolation is needed; otherwise F_p is interpolated linearly and the
/// pump grid must cover every ω_i + ω_s.
pub fn build_jsa(
    source: &RingSource,
    idler_grid: &FrequencyGrid,
    signal_grid: &FrequencyGrid,
    numerics: &Numerics,
) -> Result<JointSpectralAmplitude> {
    numerics.validate()?;
    let f_p = PumpConvolution::new(source, idler_grid, signal_grid, numerics)?;
    let l_i: Vec<Complex64> = idler_grid
        .points()
        .map(|w| source.idler_res.lineshape(w))
        .collect();
    let l_s: Vec<Complex64> = signal_grid
        .points()
        .map(|w| source.signal_res.lineshape(w))
        .collect();
    let n_s = signal_grid.n_points();

    let mut values = vec![Complex64::new(0.0, 0.0); idler_grid.n_points() * n_s];
    values.par_chunks_mut(n_s).enumerate().for_each(|(a, row)| {
        let w_i = idler_grid.point(a);
        for (b, v) in row.iter_mut().enumerate() {
            let w_s = signal_grid.point(b);
            *v = f_p.at(a, b, w_i + w_s) * l_i[a] * l_s[b];
        }
    });
    let jsa = JointSpectralAmplitude::new(*idler_grid, *signal_grid, values)?;
    if !jsa.is_finite() {
        return Err(Error::NonFinite("joint spectral amplitude"));
    }
    Ok(jsa)
}

/// [`build_jsa`] on the source's default grids.
pub fn build_default_jsa(
    source: &RingSource,
    numerics: &Numerics,
) -> Result<JointSpectralAmplitude> {
    let (idler, signal) = source.default_grids(numerics)?;
    build_jsa(source, &idler, &signal, numerics)
}

/// |A|² normalized to unit maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectralIntensity {
    idler_grid: FrequencyGrid,
    signal_grid: FrequencyGrid,
    values: Vec<f64>,
}

impl JointSpectralIntensity {
    pub fn idler_grid(&self) -> &FrequencyGrid {
        &self.idler_grid
    }

    pub fn signal_grid(&self) -> &FrequencyGrid {
        &self.signal_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, idler: usize, signal: usize) -> f64 {
        self.values[idler * self.signal_grid.n_points() + signal]
    }

    pub fn row(&self, idler: usize) -> &[f64] {
        let n = self.signal_grid.n_points();
        &self.values[idler * n..(idler + 1) * n]
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Signal index of the maximum of an idler row (first one on ties).
    pub fn row_argmax(&self, idler: usize) -> usize {
        let row = self.row(idler);
        let mut best = 0;
        for (b, v) in row.iter().enumerate() {
            if *v > row[best] {
                best = b;
            }
        }
        best
    }

    /// Largest shift, in signal bins, of the row maximum over the rows within
    /// `span` of the idler grid center, relative to the center row. An
    /// anti-diagonal ridge (spectral anti-correlation) gives a large drift.
    pub fn row_argmax_drift(&self, span: f64) -> usize {
        let center = self.idler_grid.center_offset();
        let reference = self.row_argmax(self.idler_grid.nearest_index(center)) as isize;
        (0..self.idler_grid.n_points())
            .filter(|&a| (self.idler_grid.point(a) - center).abs() <= span)
            .map(|a| (self.row_argmax(a) as isize - reference).unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

/// Joint spectral intensity |A|², normalized to unit maximum.
pub fn jsi(jsa: &JointSpectralAmplitude) -> Result<JointSpectralIntensity> {
    let raw: Vec<f64> = jsa.values().iter().map(|v| v.norm_sqr()).collect();
    let peak = raw.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    if !peak.is_finite() {
        return Err(Error::NonFinite("joint spectral intensity"));
    }
    Ok(JointSpectralIntensity {
        idler_grid: *jsa.idler_grid(),
        signal_grid: *jsa.signal_grid(),
        values: raw.into_iter().map(|v| v / peak).collect(),
    })
}

/// R/R₀: ratio of pair probabilities of two JSAs built at the same
/// incident-energy normalization.
pub fn relative_rate(
    jsa: &JointSpectralAmplitude,
    reference: &JointSpectralAmplitude,
) -> Result<f64> {
    if reference.norm_sq() == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(jsa.norm_sq() / reference.norm_sq())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coarse() -> Numerics {
        Numerics {
            jsa_points: 96,
            ..Numerics::default()
        }
    }

    #[test]
    fn zero_pump_gives_zero_jsa() {
        let pump = PumpSpec::dual_pulse(0.2, 0.5, 0.0, PI).unwrap();
        let source = RingSource::new(Resonance::unit(), pump);
        let jsa = build_default_jsa(&source, &coarse()).unwrap();
        assert!(jsa.values().iter().all(|v| v.norm() < 1e-15));
        assert!(jsa.norm_sq() < 1e-28);
        let exact_zero = jsa.scaled(Complex64::new(0.0, 0.0));
        assert_eq!(exact_zero.norm_sq(), 0.0);
        assert!(matches!(jsi(&exact_zero), Err(Error::ZeroAmplitude)));
        assert!(matches!(
            relative_rate(&jsa, &exact_zero),
            Err(Error::ZeroReference)
        ));
    }

    #[test]
    fn norm_sq_matches_recomputation() {
        let pump = PumpSpec::dual_pulse(0.2, 0.7, 0.5, PI).unwrap();
        let jsa = build_default_jsa(&RingSource::new(Resonance::unit(), pump), &coarse()).unwrap();
        assert!((jsa.norm_sq() - jsa.recomputed_norm_sq()).abs() <= 1e-12 * jsa.norm_sq());
    }

    #[test]
    fn jsa_is_exchange_symmetric_for_identical_resonances() {
        let pump = PumpSpec::dual_pulse(0.15, 0.6, 0.4, 2.5).unwrap();
        let jsa = build_default_jsa(&RingSource::new(Resonance::unit(), pump), &coarse()).unwrap();
        let n = jsa.n_idler();
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (jsa.get(a, b).norm(), jsa.get(b, a).norm());
                assert!((x - y).abs() <= 1e-14 * x.max(y).max(1e-300));
            }
        }
    }

    #[test]
    fn aligned_and_interpolated_paths_agree() {
        let pump = PumpSpec::dual_pulse(0.2, 0.6, 0.3, PI).unwrap();
        let source = RingSource::new(Resonance::unit(), pump);
        let numerics = coarse();
        let idler = FrequencyGrid::symmetric(6.0, 96).unwrap();
        // a different point count forces the interpolated path
        let signal = FrequencyGrid::symmetric(6.0, 95).unwrap();
        let interpolated = build_jsa(&source, &idler, &signal, &numerics).unwrap();
        let aligned = build_jsa(&source, &signal, &signal, &numerics).unwrap();
        let scale = interpolated
            .values()
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        // the 95-point signal grid is shared, compare the rows at matching idler frequencies
        for a in [0, 47, 94] {
            let w = signal.point(a);
            let ai = idler.nearest_index(w);
            if (idler.point(ai) - w).abs() > 1e-12 {
                continue;
            }
            for b in 0..95 {
                let diff = (interpolated.get(ai, b) - aligned.get(a, b)).norm();
                assert!(diff < 1e-3 * scale);
            }
        }
        assert!((interpolated.norm_sq() / aligned.norm_sq() - 1.0).abs() < 0.05);
    }

    #[test]
    fn coverage_error_for_out_of_reach_grids() {
        let source = RingSource::new(Resonance::unit(), PumpSpec::single(1.0).unwrap());
        let numerics = coarse();
        let idler = FrequencyGrid::new(15.0, 6.0, 64).unwrap();
        let signal = FrequencyGrid::new(15.0, 6.0, 63).unwrap();
        match build_jsa(&source, &idler, &signal, &numerics) {
            Err(Error::Coverage { required, .. }) => assert!((required.1 - 42.0).abs() < 1e-9),
            other => panic!("expected coverage error, got {other:?}"),
        }
    }

    #[test]
    fn single_pulse_reference_has_unit_energy() {
        let source = RingSource::new(Resonance::unit(), PumpSpec::single(0.1).unwrap());
        let grid = FrequencyGrid::symmetric(80.0, 20001).unwrap();
        let energy = source.incident_envelope(&grid).unwrap().energy();
        assert!((energy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn target_normalization_is_unit_energy() {
        let res = Resonance::unit().with_detuning(0.3);
        let source = RingSource::new(res, PumpSpec::target(0.2, 5.0).unwrap());
        let grid = FrequencyGrid::symmetric(60.0, 24001).unwrap();
        let energy = source.incident_envelope(&grid).unwrap().energy();
        assert!((energy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let pump = PumpSpec::dual_pulse(0.3, 0.4, -0.2, 3.0).unwrap();
        let numerics = Numerics {
            jsa_points: 12,
            ..Numerics::default()
        };
        let jsa = build_default_jsa(&RingSource::new(Resonance::unit(), pump), &numerics).unwrap();
        let mut buf = Vec::new();
        jsa.write_json(&mut buf).unwrap();
        let back = JointSpectralAmplitude::read_json(buf.as_slice()).unwrap();
        assert_eq!(back, jsa);
    }

    #[test]
    fn csv_has_metadata_and_side_by_side_columns() {
        let numerics = Numerics {
            jsa_points: 4,
            ..Numerics::default()
        };
        let source = RingSource::new(Resonance::unit(), PumpSpec::single(0.5).unwrap());
        let jsa = build_default_jsa(&source, &numerics).unwrap();
        let mut buf = Vec::new();
        jsa.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(
            lines[1].starts_with("# idler_grid: center_offset = 0, half_width = 6, n_points = 4")
        );
        assert_eq!(lines[4], "re_0,re_1,re_2,re_3,im_0,im_1,im_2,im_3");
        assert_eq!(lines.len(), 5 + 4);
        let first: Vec<f64> = lines[5].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(first[1], jsa.get(0, 1).re);
        assert_eq!(first[4 + 2], jsa.get(0, 2).im);
    }
}
