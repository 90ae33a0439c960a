//! Frequency grids, resonance lineshapes, pump envelopes and the pump
//! self-convolution F_p.
//!
//! Frequencies are angular frequencies relative to a resonance center. The
//! crate works in units of the pump linewidth Ω (see [`crate::units`]), but
//! nothing here depends on that choice: a [`Resonance`] carries its own
//! ω₀ and Q.
//!
//! Time-domain fields use A(t) = (1/2π)∫A(ω)e^{+iωt}dω. With this sign the
//! lineshape 1/(ω₀/2Q + iω) is causal (e^{-Ωt/2} for t > 0) and the factor
//! exp(−iΔτω) delays a pulse by Δτ.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::numerics::{Numerics, TruncationGuard};

/// Uniform grid of relative angular frequencies.
///
/// Points are `center_offset + (2k − (n−1))·half_width/(n−1)`, so a grid with
/// zero offset is exactly symmetric about zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    center_offset: f64,
    half_width: f64,
    n_points: usize,
}

impl FrequencyGrid {
    pub fn new(center_offset: f64, half_width: f64, n_points: usize) -> Result<Self> {
        ensure_finite(center_offset, "center_offset")?;
        ensure_finite(half_width, "half_width")?;
        if half_width <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "grid half_width must be positive, got {half_width}"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 points, got {n_points}"
            )));
        }
        Ok(Self {
            center_offset,
            half_width,
            n_points,
        })
    }

    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(0.0, half_width, n_points)
    }

    /// Odd-sized grid `center ± k·spacing`, k = 0..=half_count.
    pub fn from_spacing(center_offset: f64, spacing: f64, half_count: usize) -> Result<Self> {
        if half_count == 0 {
            return Err(Error::InvalidParameter(
                "half_count must be positive".to_string(),
            ));
        }
        Self::new(
            center_offset,
            spacing * half_count as f64,
            2 * half_count + 1,
        )
    }

    pub fn center_offset(&self) -> f64 {
        self.center_offset
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        let steps = 2.0 * k as f64 - (self.n_points - 1) as f64;
        self.center_offset + steps * (self.half_width / (self.n_points - 1) as f64)
    }

    pub fn start(&self) -> f64 {
        self.point(0)
    }

    pub fn end(&self) -> f64 {
        self.point(self.n_points - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.point(k))
    }

    pub fn nearest_index(&self, omega: f64) -> usize {
        let t = (omega - self.start()) / self.spacing();
        t.round().clamp(0.0, (self.n_points - 1) as f64) as usize
    }

    /// Same grid with every resolution doubled (2n − 1 points, same span),
    /// so every original point stays a grid point.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }

    /// Default grid for 1-D pump spectra: half-width max(10Ω, 6/τ_p, 6σ) plus
    /// the resonance detuning, spacing at most Ω/64, at least 1024 points.
    pub fn for_pump(pump: &PumpSpec, res: &Resonance, numerics: &Numerics) -> Result<Self> {
        let linewidth = res.linewidth();
        let spacing = numerics.pump_max_spacing * linewidth;
        let half_width = pump_half_width(pump, res, numerics);
        let min_half = (numerics.pump_min_points.max(2) - 1).div_ceil(2);
        let half_count = ((half_width / spacing).ceil() as usize).max(min_half);
        Self::from_spacing(0.0, half_width / half_count as f64, half_count)
    }
}

/// Half-width a pump grid needs so that the in-resonator field has decayed
/// at its edges.
pub(crate) fn pump_half_width(pump: &PumpSpec, res: &Resonance, numerics: &Numerics) -> f64 {
    let linewidth = res.linewidth();
    let mut half_width =
        (numerics.pump_min_half_width * linewidth).max(numerics.pump_pulse_widths / pump.tau_p());
    if let PumpShape::Target { sigma } = pump.shape() {
        half_width = half_width.max(numerics.pump_pulse_widths * sigma);
    }
    half_width + res.detuning().abs()
}

/// A Lorentzian resonance with center ω₀, loaded quality factor Q and an
/// optional shift of its center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    omega0: f64,
    q_loaded: f64,
    #[serde(default)]
    detuning: f64,
}

impl Resonance {
    pub fn new(omega0: f64, q_loaded: f64) -> Result<Self> {
        ensure_finite(omega0, "omega0")?;
        ensure_finite(q_loaded, "q_loaded")?;
        if omega0 <= 0.0 || q_loaded <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "resonance needs omega0 > 0 and Q > 0, got omega0 = {omega0}, Q = {q_loaded}"
            )));
        }
        Ok(Self {
            omega0,
            q_loaded,
            detuning: 0.0,
        })
    }

    /// A resonance of quality factor `q_loaded` expressed in units of its own
    /// linewidth (ω₀ = Q, so Ω = 1).
    pub fn normalized(q_loaded: f64) -> Result<Self> {
        Self::new(q_loaded, q_loaded)
    }

    /// Unit-linewidth resonance; only ω₀/Q enters the lineshape.
    pub fn unit() -> Self {
        Self {
            omega0: 1.0,
            q_loaded: 1.0,
            detuning: 0.0,
        }
    }

    pub fn with_detuning(self, detuning: f64) -> Self {
        Self { detuning, ..self }
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn q_loaded(&self) -> f64 {
        self.q_loaded
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    /// Full width at half maximum of |l|², ω₀/Q.
    pub fn linewidth(&self) -> f64 {
        self.omega0 / self.q_loaded
    }

    fn half_linewidth(&self) -> f64 {
        self.omega0 / (2.0 * self.q_loaded)
    }

    /// l(ω) = 1/(ω₀/2Q + i(ω − δ)).
    pub fn lineshape(&self, omega: f64) -> Complex64 {
        Complex64::new(self.half_linewidth(), omega - self.detuning).inv()
    }

    /// 1/l(ω), a first-order polynomial in ω with no singularities.
    pub fn inverse_lineshape(&self, omega: f64) -> Complex64 {
        Complex64::new(self.half_linewidth(), omega - self.detuning)
    }
}

/// Spectral shape of the incident pump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum PumpShape {
    SingleGaussian,
    /// Two Gaussian pulses of weight η and 1 − η, the second delayed by Δτ
    /// and phase shifted by φ.
    DualPulse {
        eta: f64,
        delta_tau: f64,
        phi: f64,
    },
    /// 1/l_p(ω)·exp(−ω²/2σ²), whose in-resonator field is an exact Gaussian.
    Target {
        sigma: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    tau_p: f64,
    #[serde(flatten)]
    shape: PumpShape,
}

impl PumpSpec {
    pub fn new(tau_p: f64, shape: PumpShape) -> Result<Self> {
        ensure_finite(tau_p, "tau_p")?;
        if tau_p <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tau_p must be positive, got {tau_p}"
            )));
        }
        match shape {
            PumpShape::SingleGaussian => {}
            PumpShape::DualPulse {
                eta,
                delta_tau,
                phi,
            } => {
                ensure_finite(delta_tau, "delta_tau")?;
                ensure_finite(phi, "phi")?;
                if !(0.0..=1.0).contains(&eta) {
                    return Err(Error::InvalidParameter(format!(
                        "eta must lie in [0, 1], got {eta}"
                    )));
                }
            }
            PumpShape::Target { sigma } => {
                ensure_finite(sigma, "sigma")?;
                if sigma <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "sigma must be positive, got {sigma}"
                    )));
                }
            }
        }
        Ok(Self { tau_p, shape })
    }

    pub fn single(tau_p: f64) -> Result<Self> {
        Self::new(tau_p, PumpShape::SingleGaussian)
    }

    pub fn dual_pulse(tau_p: f64, eta: f64, delta_tau: f64, phi: f64) -> Result<Self> {
        Self::new(
            tau_p,
            PumpShape::DualPulse {
                eta,
                delta_tau,
                phi,
            },
        )
    }

    pub fn target(tau_p: f64, sigma: f64) -> Result<Self> {
        Self::new(tau_p, PumpShape::Target { sigma })
    }

    pub fn tau_p(&self) -> f64 {
        self.tau_p
    }

    pub fn shape(&self) -> PumpShape {
        self.shape
    }

    /// The swapped configuration (1 − η, −Δτ, −φ) whose envelope has the
    /// same modulus. Other shapes are returned unchanged.
    pub fn mirrored(&self) -> Self {
        match self.shape {
            PumpShape::DualPulse {
                eta,
                delta_tau,
                phi,
            } => Self {
                tau_p: self.tau_p,
                shape: PumpShape::DualPulse {
                    eta: 1.0 - eta,
                    delta_tau: -delta_tau,
                    phi: -phi,
                },
            },
            _ => *self,
        }
    }

    /// Envelope value at ω. Target pumps need the pump resonance.
    pub fn envelope_at(&self, omega: f64, res: Option<&Resonance>) -> Result<Complex64> {
        let gaussian = |tau: f64| (-0.5 * tau * tau * omega * omega).exp();
        Ok(match self.shape {
            PumpShape::SingleGaussian => {
                dual_pulse_factor(1.0, 0.0, PI, omega) * gaussian(self.tau_p)
            }
            PumpShape::DualPulse {
                eta,
                delta_tau,
                phi,
            } => dual_pulse_factor(eta, delta_tau, phi, omega) * gaussian(self.tau_p),
            PumpShape::Target { sigma } => {
                let res = res.ok_or_else(|| {
                    Error::Config("target pump spectrum requires the pump resonance".to_string())
                })?;
                res.inverse_lineshape(omega) * (-0.5 * omega * omega / (sigma * sigma)).exp()
            }
        })
    }
}

/// √η + e^{iφ}e^{−iΔτω}√(1−η). A single pulse is η = 1, which makes the
/// second term an exact zero.
fn dual_pulse_factor(eta: f64, delta_tau: f64, phi: f64, omega: f64) -> Complex64 {
    let second = Complex64::from_polar((1.0 - eta).sqrt(), phi - delta_tau * omega);
    Complex64::new(eta.sqrt(), 0.0) + second
}

/// Complex amplitude sampled on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.n_points()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: FrequencyGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: FrequencyGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Σ|A|²·dω.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn peak_magnitude(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn magnitude(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Spectral phase wrapped to (−π, π].
    pub fn phase(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.arg()).collect()
    }

    /// Largest edge magnitude relative to the peak; zero for a zero spectrum.
    pub fn edge_ratio(&self) -> f64 {
        let peak = self.peak_magnitude();
        if peak == 0.0 {
            return 0.0;
        }
        let first = self.values[0].norm();
        let last = self.values[self.values.len() - 1].norm();
        first.max(last) / peak
    }

    pub fn scaled(mut self, factor: Complex64) -> Self {
        for v in &mut self.values {
            *v *= factor;
        }
        self
    }

    /// Pointwise product; both spectra must share a grid.
    pub fn product(&self, other: &ComplexSpectrum) -> Result<ComplexSpectrum> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "cannot multiply spectra on {:?} and {:?}",
                self.grid, other.grid
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// Linear interpolation at ω, or `None` outside the grid.
    pub fn sample(&self, omega: f64) -> Option<Complex64> {
        let h = self.grid.spacing();
        let t = (omega - self.grid.start()) / h;
        let last = (self.grid.n_points() - 1) as f64;
        let slack = 1e-9;
        if !(t >= -slack && t <= last + slack) {
            return None;
        }
        let t = t.clamp(0.0, last);
        let k = (t.floor() as usize).min(self.grid.n_points() - 2);
        let frac = t - k as f64;
        if frac.abs() < 1e-12 {
            return Some(self.values[k]);
        }
        if (1.0 - frac).abs() < 1e-12 {
            return Some(self.values[k + 1]);
        }
        Some(self.values[k] * (1.0 - frac) + self.values[k + 1] * frac)
    }

    /// Resample onto `grid` by linear interpolation.
    pub fn resample(&self, grid: &FrequencyGrid) -> Result<ComplexSpectrum> {
        if grid.start() < self.grid.start() - 1e-9 * self.grid.spacing()
            || grid.end() > self.grid.end() + 1e-9 * self.grid.spacing()
        {
            return Err(Error::Coverage {
                required: (grid.start(), grid.end()),
                available: (self.grid.start(), self.grid.end()),
            });
        }
        let values = grid
            .points()
            .map(|w| self.sample(w).expect("coverage checked above"))
            .collect();
        Ok(Self {
            grid: *grid,
            values,
        })
    }

    /// Full width at half maximum of |A|², from the outermost half-maximum
    /// crossings, linearly interpolated. `None` if the spectrum is zero or a
    /// crossing lies outside the grid.
    pub fn intensity_fwhm(&self) -> Option<f64> {
        full_width_half_max(&self.intensity(), self.grid.spacing())
    }
}

/// FWHM of sampled non-negative data on a uniform axis.
pub fn full_width_half_max(y: &[f64], dx: f64) -> Option<f64> {
    let peak = y.iter().cloned().fold(0.0, f64::max);
    if peak <= 0.0 {
        return None;
    }
    let half = 0.5 * peak;
    let first = y.iter().position(|&v| v >= half)?;
    let last = y.iter().rposition(|&v| v >= half)?;
    if first == 0 || last == y.len() - 1 {
        return None;
    }
    let left = first as f64 - (y[first] - half) / (y[first] - y[first - 1]);
    let right = last as f64 + (y[last] - half) / (y[last] - y[last + 1]);
    Some((right - left) * dx)
}

/// l(ω) sampled on `grid`.
pub fn lorentzian_lineshape(grid: &FrequencyGrid, res: &Resonance) -> ComplexSpectrum {
    ComplexSpectrum::from_fn(*grid, |w| res.lineshape(w))
}

/// Incident pump envelope α_p(ω), unnormalized.
///
/// Target pumps need the resonance; use [`target_envelope`] or
/// [`pump_envelope_with_resonance`] for those.
pub fn pump_envelope(grid: &FrequencyGrid, pump: &PumpSpec) -> Result<ComplexSpectrum> {
    let values = grid
        .points()
        .map(|w| pump.envelope_at(w, None))
        .collect::<Result<Vec<_>>>()?;
    ComplexSpectrum::new(*grid, values)
}

pub fn pump_envelope_with_resonance(
    grid: &FrequencyGrid,
    pump: &PumpSpec,
    res: &Resonance,
) -> Result<ComplexSpectrum> {
    let values = grid
        .points()
        .map(|w| pump.envelope_at(w, Some(res)))
        .collect::<Result<Vec<_>>>()?;
    ComplexSpectrum::new(*grid, values)
}

/// l_p⁻¹(ω)·exp(−ω²/2σ²).
pub fn target_envelope(
    grid: &FrequencyGrid,
    res: &Resonance,
    sigma: f64,
) -> Result<ComplexSpectrum> {
    let pump = PumpSpec::target(1.0, sigma)?;
    pump_envelope_with_resonance(grid, &pump, res)
}

/// In-resonator field A_p(ω) = α_p(ω)·l_p(ω).
pub fn in_resonator_field(envelope: &ComplexSpectrum, res: &Resonance) -> Result<ComplexSpectrum> {
    envelope.product(&lorentzian_lineshape(envelope.grid(), res))
}

/// Self-convolution of `field` on its natural lattice: 2n − 1 points with
/// the input spacing, covering [2·start, 2·end].
///
/// F(ω_k) = dω·Σ_j A(ω_j)A(ω_k − ω_j), evaluated with a zero-padded FFT.
pub fn self_convolution_lattice(
    field: &ComplexSpectrum,
    guard: &TruncationGuard,
) -> Result<ComplexSpectrum> {
    let grid = field.grid();
    check_truncation(field, guard)?;
    if field
        .values()
        .iter()
        .any(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::NonFinite("in-resonator field"));
    }
    let n = grid.n_points();
    let out_len = 2 * n - 1;
    let fft_len = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(fft_len);
    let inverse = planner.plan_fft_inverse(fft_len);

    let mut buffer = vec![Complex64::new(0.0, 0.0); fft_len];
    buffer[..n].copy_from_slice(field.values());
    forward.process(&mut buffer);
    for v in &mut buffer {
        *v = *v * *v;
    }
    inverse.process(&mut buffer);

    let scale = grid.spacing() / fft_len as f64;
    let values = buffer[..out_len].iter().map(|v| v * scale).collect();
    let lattice = FrequencyGrid::new(2.0 * grid.center_offset(), 2.0 * grid.half_width(), out_len)?;
    ComplexSpectrum::new(lattice, values)
}

/// F_p(ω) = ∫dω′ A_p(ω−ω′)A_p(ω′) evaluated on `out_grid` (linear
/// interpolation from the convolution lattice).
pub fn pump_self_convolution(
    field: &ComplexSpectrum,
    out_grid: &FrequencyGrid,
    guard: &TruncationGuard,
) -> Result<ComplexSpectrum> {
    self_convolution_lattice(field, guard)?.resample(out_grid)
}

fn check_truncation(field: &ComplexSpectrum, guard: &TruncationGuard) -> Result<()> {
    let ratio = field.edge_ratio();
    if ratio > guard.tolerance {
        if guard.strict {
            return Err(Error::Truncation {
                ratio,
                tolerance: guard.tolerance,
            });
        }
        log::warn!(
            "in-resonator field is truncated: edge magnitude {ratio:.3e} of peak exceeds {:.1e}",
            guard.tolerance
        );
    }
    Ok(())
}

/// Complex field on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalField {
    t_start: f64,
    dt: f64,
    values: Vec<Complex64>,
}

impl TemporalField {
    pub fn new(t_start: f64, dt: f64, values: Vec<Complex64>) -> Result<Self> {
        ensure_finite(t_start, "t_start")?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "time step must be positive, got {dt}"
            )));
        }
        if values.len() < 2 {
            return Err(Error::InvalidParameter(
                "time grid needs at least 2 points".to_string(),
            ));
        }
        Ok(Self {
            t_start,
            dt,
            values,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, m: usize) -> f64 {
        self.t_start + m as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |m| self.time(m))
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Σ|A(t)|²·dt.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dt
    }

    /// Time of maximum |A(t)|².
    pub fn peak_time(&self) -> f64 {
        let (m, _) = self
            .values
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (m, v)| {
                if v.norm_sqr() > best.1 {
                    (m, v.norm_sqr())
                } else {
                    best
                }
            });
        self.time(m)
    }

    /// Fraction of the energy arriving after time `t`.
    pub fn energy_fraction_after(&self, t: f64) -> f64 {
        let total = self.energy();
        if total == 0.0 {
            return 0.0;
        }
        let after: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(m, _)| self.time(*m) > t)
            .map(|(_, v)| v.norm_sqr())
            .sum();
        after * self.dt / total
    }
}

/// A(t) = (1/2π)∫A(ω)e^{iωt}dω on the time grid conjugate to the frequency
/// grid: n points, dt = 2π/(n·dω), t = (m − ⌊n/2⌋)·dt.
///
/// Energies satisfy Σ|A(t)|²dt = Σ|A(ω)|²dω / 2π exactly.
pub fn to_time_domain(field: &ComplexSpectrum) -> TemporalField {
    let grid = field.grid();
    let n = grid.n_points();
    let h = grid.spacing();
    let dt = 2.0 * PI / (n as f64 * h);
    let shift = (n / 2) as f64;
    let w0 = grid.start();

    let mut buffer: Vec<Complex64> = field
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| v * Complex64::from_polar(1.0, -2.0 * PI * k as f64 * shift / n as f64))
        .collect();
    FftPlanner::<f64>::new()
        .plan_fft_inverse(n)
        .process(&mut buffer);

    let t_start = -shift * dt;
    let values = buffer
        .into_iter()
        .enumerate()
        .map(|(m, v)| {
            let t = t_start + m as f64 * dt;
            v * Complex64::from_polar(h / (2.0 * PI), w0 * t)
        })
        .collect();
    TemporalField {
        t_start,
        dt,
        values,
    }
}

/// Inverse of [`to_time_domain`]: A(ω) = ∫A(t)e^{−iωt}dt on `grid`, which
/// must be the frequency grid the time grid is conjugate to.
pub fn from_time_domain(field: &TemporalField, grid: &FrequencyGrid) -> Result<ComplexSpectrum> {
    let n = grid.n_points();
    if field.len() != n {
        return Err(Error::GridMismatch(format!(
            "{} time samples for a frequency grid of {n} points",
            field.len()
        )));
    }
    let h = grid.spacing();
    let expected_dt = 2.0 * PI / (n as f64 * h);
    let shift = (n / 2) as f64;
    if ((field.dt - expected_dt) / expected_dt).abs() > 1e-12
        || (field.t_start + shift * field.dt).abs() > 1e-9 * field.dt
    {
        return Err(Error::GridMismatch(
            "time grid is not conjugate to the frequency grid".to_string(),
        ));
    }
    let w0 = grid.start();
    let mut buffer: Vec<Complex64> = field
        .values
        .iter()
        .enumerate()
        .map(|(m, v)| v * Complex64::from_polar(1.0, -w0 * field.time(m)))
        .collect();
    FftPlanner::<f64>::new()
        .plan_fft_forward(n)
        .process(&mut buffer);
    let values = buffer
        .into_iter()
        .enumerate()
        .map(|(k, v)| v * Complex64::from_polar(field.dt, 2.0 * PI * k as f64 * shift / n as f64))
        .collect();
    ComplexSpectrum::new(*grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_is_symmetric_and_uniform() {
        let g = FrequencyGrid::symmetric(6.0, 512).unwrap();
        for k in 0..512 {
            assert_eq!(g.point(k), -g.point(511 - k));
        }
        assert_eq!(g.start(), -6.0);
        assert_eq!(g.end(), 6.0);
        let h = g.spacing();
        for k in 1..512 {
            assert!((g.point(k) - g.point(k - 1) - h).abs() < 1e-14);
        }
    }

    #[test]
    fn grid_rejects_bad_shapes() {
        assert!(FrequencyGrid::symmetric(1.0, 1).is_err());
        assert!(FrequencyGrid::symmetric(0.0, 10).is_err());
        assert!(FrequencyGrid::symmetric(-1.0, 10).is_err());
        assert!(FrequencyGrid::new(f64::NAN, 1.0, 10).is_err());
    }

    #[test]
    fn lineshape_peak_is_two_q_over_omega0() {
        let res = Resonance::new(1.2e15, 5.0e4).unwrap();
        let v = res.lineshape(0.0);
        assert_eq!(v.im, 0.0);
        assert!((v.re - 2.0 * 5.0e4 / 1.2e15).abs() / v.re < 1e-15);
    }

    #[test]
    fn lineshape_intensity_half_maximum_at_half_linewidth() {
        let res = Resonance::normalized(2.0e5).unwrap();
        let peak = res.lineshape(0.0).norm_sqr();
        for w in [-0.5, 0.5] {
            assert!((res.lineshape(w).norm_sqr() / peak - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn detuning_moves_the_peak() {
        let grid = FrequencyGrid::symmetric(5.0, 201).unwrap();
        let res = Resonance::unit().with_detuning(1.23);
        let l = lorentzian_lineshape(&grid, &res);
        let argmax = l
            .magnitude()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(argmax, grid.nearest_index(1.23));
    }

    #[test]
    fn single_gaussian_is_dual_pulse_with_unit_eta() {
        let grid = FrequencyGrid::symmetric(40.0, 1001).unwrap();
        let single = pump_envelope(&grid, &PumpSpec::single(0.1).unwrap()).unwrap();
        for (dt, phi) in [(0.0, PI), (0.7, 1.3), (-3.0, 0.0)] {
            let dual =
                pump_envelope(&grid, &PumpSpec::dual_pulse(0.1, 1.0, dt, phi).unwrap()).unwrap();
            for (a, b) in single.values().iter().zip(dual.values()) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
        assert_eq!(single.values()[500], c(1.0, 0.0));
    }

    #[test]
    fn balanced_unshifted_dual_pulse_vanishes() {
        let grid = FrequencyGrid::symmetric(40.0, 801).unwrap();
        let env = pump_envelope(&grid, &PumpSpec::dual_pulse(0.2, 0.5, 0.0, PI).unwrap()).unwrap();
        assert!(env.peak_magnitude() < 1e-15);
    }

    #[test]
    fn dual_pulse_value_at_zero_frequency() {
        let pump = PumpSpec::dual_pulse(0.1, 0.55, 0.2, PI).unwrap();
        let v = pump.envelope_at(0.0, None).unwrap();
        let expected = 0.55f64.sqrt() - 0.45f64.sqrt();
        assert!((v.re - expected).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
        assert!((expected - 0.070_800).abs() < 1e-6);
    }

    #[test]
    fn target_needs_resonance() {
        let grid = FrequencyGrid::symmetric(10.0, 11).unwrap();
        let pump = PumpSpec::target(0.1, 10.0).unwrap();
        assert!(matches!(pump_envelope(&grid, &pump), Err(Error::Config(_))));
        assert!(pump_envelope_with_resonance(&grid, &pump, &Resonance::unit()).is_ok());
    }

    #[test]
    fn pump_spec_validation() {
        assert!(PumpSpec::single(0.0).is_err());
        assert!(PumpSpec::dual_pulse(0.1, 1.2, 0.0, PI).is_err());
        assert!(PumpSpec::dual_pulse(0.1, -0.1, 0.0, PI).is_err());
        assert!(PumpSpec::target(0.1, 0.0).is_err());
        assert!(PumpSpec::dual_pulse(0.1, 0.3, f64::INFINITY, PI).is_err());
    }

    #[test]
    fn zero_envelope_gives_zero_field() {
        let grid = FrequencyGrid::symmetric(10.0, 101).unwrap();
        let field = in_resonator_field(&ComplexSpectrum::zeros(grid), &Resonance::unit()).unwrap();
        assert!(field.values().iter().all(|v| *v == c(0.0, 0.0)));
    }

    #[test]
    fn target_field_is_gaussian() {
        let sigma = 3.0;
        let res = Resonance::unit().with_detuning(0.4);
        let grid = FrequencyGrid::symmetric(30.0, 1201).unwrap();
        let env = target_envelope(&grid, &res, sigma).unwrap();
        let field = in_resonator_field(&env, &res).unwrap();
        for (w, v) in grid.points().zip(field.values()) {
            let g = (-w * w / (2.0 * sigma * sigma)).exp();
            assert!((v - c(g, 0.0)).norm() <= 1e-15 * g.max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let a = ComplexSpectrum::zeros(FrequencyGrid::symmetric(1.0, 10).unwrap());
        let b = ComplexSpectrum::zeros(FrequencyGrid::symmetric(1.0, 11).unwrap());
        assert!(matches!(a.product(&b), Err(Error::GridMismatch(_))));
        assert!(ComplexSpectrum::new(*a.grid(), vec![c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn impulse_convolves_to_impulse_at_double_frequency() {
        let grid = FrequencyGrid::symmetric(5.0, 101).unwrap();
        let mut values = vec![c(0.0, 0.0); 101];
        values[63] = c(2.0, 1.0);
        let spike = ComplexSpectrum::new(grid, values).unwrap();
        let guard = TruncationGuard {
            tolerance: 1.0,
            strict: true,
        };
        let f = self_convolution_lattice(&spike, &guard).unwrap();
        let expected_index = f.grid().nearest_index(2.0 * grid.point(63));
        assert_eq!(expected_index, 126);
        let expected = c(2.0, 1.0) * c(2.0, 1.0) * grid.spacing();
        for (k, v) in f.values().iter().enumerate() {
            if k == expected_index {
                assert!((v - expected).norm() < 1e-13);
            } else {
                assert!(v.norm() < 1e-13, "leakage at {k}: {v}");
            }
        }
    }

    #[test]
    fn strict_guard_rejects_truncated_field() {
        let grid = FrequencyGrid::symmetric(2.0, 101).unwrap();
        let field = lorentzian_lineshape(&grid, &Resonance::unit());
        let strict = TruncationGuard {
            tolerance: 1e-6,
            strict: true,
        };
        assert!(matches!(
            self_convolution_lattice(&field, &strict),
            Err(Error::Truncation { .. })
        ));
        let lenient = TruncationGuard {
            tolerance: 1e-6,
            strict: false,
        };
        assert!(self_convolution_lattice(&field, &lenient).is_ok());
    }

    #[test]
    fn coverage_error_names_required_span() {
        let grid = FrequencyGrid::symmetric(10.0, 201).unwrap();
        let field = ComplexSpectrum::from_fn(grid, |w| c((-w * w).exp(), 0.0));
        let wide = FrequencyGrid::symmetric(25.0, 11).unwrap();
        match pump_self_convolution(&field, &wide, &TruncationGuard::default()) {
            Err(Error::Coverage {
                required,
                available,
            }) => {
                assert_eq!(required, (-25.0, 25.0));
                assert!((available.1 - 20.0).abs() < 1e-12);
            }
            other => panic!("expected coverage error, got {other:?}"),
        }
    }

    #[test]
    fn gaussian_spectrum_maps_to_gaussian_pulse() {
        let sigma = 2.0;
        let grid = FrequencyGrid::symmetric(20.0, 2048).unwrap();
        let spec =
            ComplexSpectrum::from_fn(grid, |w| c((-w * w / (2.0 * sigma * sigma)).exp(), 0.0));
        let pulse = to_time_domain(&spec);
        // (1/2π)∫e^{-ω²/2σ²}e^{iωt}dω = σ/√(2π)·e^{-σ²t²/2}
        for (t, v) in pulse.times().zip(pulse.values()) {
            let expected = sigma / (2.0 * PI).sqrt() * (-0.5 * sigma * sigma * t * t).exp();
            assert!((v - c(expected, 0.0)).norm() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn delay_factor_moves_pulse_later() {
        let grid = FrequencyGrid::symmetric(60.0, 4096).unwrap();
        let delay = 3.0;
        let spec = ComplexSpectrum::from_fn(grid, |w| {
            Complex64::from_polar((-w * w / 8.0).exp(), -delay * w)
        });
        let pulse = to_time_domain(&spec);
        assert!((pulse.peak_time() - delay).abs() <= pulse.dt());
    }

    #[test]
    fn time_round_trip_and_parseval() {
        let grid = FrequencyGrid::new(0.3, 15.0, 777).unwrap();
        let res = Resonance::unit();
        let pump = PumpSpec::dual_pulse(0.5, 0.6, 0.3, 2.0).unwrap();
        let env = pump_envelope(&grid, &pump).unwrap();
        let field = in_resonator_field(&env, &res).unwrap();
        let pulse = to_time_domain(&field);
        let e_w = field.energy() / (2.0 * PI);
        assert!((pulse.energy() - e_w).abs() / e_w < 1e-10);
        let back = from_time_domain(&pulse, &grid).unwrap();
        let err: f64 = back
            .values()
            .iter()
            .zip(field.values())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let norm: f64 = field.values().iter().map(|v| v.norm_sqr()).sum();
        assert!((err / norm).sqrt() < 1e-10);
    }

    #[test]
    fn fwhm_of_sampled_lorentzian() {
        let grid = FrequencyGrid::symmetric(20.0, 4001).unwrap();
        let l = lorentzian_lineshape(&grid, &Resonance::unit());
        assert!((l.intensity_fwhm().unwrap() - 1.0).abs() < 1e-4);
        assert_eq!(full_width_half_max(&[0.0, 0.0], 1.0), None);
    }
}
