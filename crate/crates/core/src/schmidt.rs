//! Schmidt decomposition of a discretized joint spectral amplitude.
//!
//! The continuum kernel A(ω_i, ω_s) is approximated by the matrix
//! K = A·√(dω_i·dω_s), so that the singular values of K approximate the
//! Schmidt coefficients λ_k and Σλ_k² is the Riemann sum of ∫∫|A|².
//! Modes are the singular vectors rescaled by 1/√dω, making them
//! orthonormal under Σ ψ*ψ dω.
//!
//! Numerically equal coefficients (within ~1e-12) may come out in either
//! order; only quantities that do not depend on mode identity inside a
//! degenerate subspace (purity, coefficient list) are stable.

use std::io::Write;

use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::matmul::matmul;
use faer::linalg::svd::{self, ComputeSvdVectors};
use faer::{Accum, Mat, MatRef, Par};
use num_complex::Complex64;

use crate::biphoton::JointSpectralAmplitude;
use crate::error::{Error, Result};
use crate::spectral::FrequencyGrid;

/// Largest fraction of Σλ² the truncated solver may discard.
pub const TRUNCATION_ACCURACY: f64 = 1e-10;

/// How singular values are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SvdStrategy {
    /// Dense SVD of the whole kernel.
    #[default]
    Full,
    /// Range-finder solve keeping only the leading coefficients. The rank
    /// starts at `initial_rank` and doubles until the discarded weight
    /// ‖K‖² − Σλ_kept² is below [`TRUNCATION_ACCURACY`] of ‖K‖²; past half
    /// the matrix size it falls back to [`SvdStrategy::Full`].
    Truncated { initial_rank: usize },
}

/// Descending Schmidt coefficients and the quantities derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    coefficients: Vec<f64>,
    purity: f64,
    schmidt_number: f64,
    rate_sum: f64,
}

impl SchmidtSpectrum {
    pub fn from_coefficients(mut coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("Schmidt coefficients"));
        }
        if coefficients.iter().any(|&c| c < 0.0) {
            return Err(Error::InvalidParameter(
                "Schmidt coefficients must be non-negative".to_string(),
            ));
        }
        coefficients.sort_by(|a, b| b.total_cmp(a));
        let rate_sum: f64 = coefficients.iter().map(|c| c * c).sum();
        if rate_sum == 0.0 {
            return Err(Error::ZeroAmplitude);
        }
        let quartic: f64 = coefficients.iter().map(|c| (c * c) * (c * c)).sum();
        let purity = quartic / (rate_sum * rate_sum);
        Ok(Self {
            coefficients,
            purity,
            schmidt_number: 1.0 / purity,
            rate_sum,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Σλ⁴/(Σλ²)².
    pub fn purity(&self) -> f64 {
        self.purity
    }

    /// K = 1/purity.
    pub fn schmidt_number(&self) -> f64 {
        self.schmidt_number
    }

    /// Σλ², equal to the JSA's `norm_sq`.
    pub fn rate_sum(&self) -> f64 {
        self.rate_sum
    }

    /// λ_k²/Σλ².
    pub fn weights(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .map(|c| c * c / self.rate_sum)
            .collect()
    }

    /// Rows `k,lambda,weight`, k starting at 1.
    pub fn write_table<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,lambda,weight")?;
        for (k, (c, p)) in self.coefficients.iter().zip(self.weights()).enumerate() {
            writeln!(w, "{},{},{}", k + 1, c, p)?;
        }
        Ok(())
    }
}

/// Leading idler and signal Schmidt modes, with
/// A(ω_i, ω_s) ≈ Σ_k λ_k ψ_i,k(ω_i) ψ_s,k(ω_s).
///
/// Each signal mode has its largest-magnitude entry real and positive; the
/// matching idler mode carries the compensating phase.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtModes {
    idler_grid: FrequencyGrid,
    signal_grid: FrequencyGrid,
    idler: Vec<Vec<Complex64>>,
    signal: Vec<Vec<Complex64>>,
}

impl SchmidtModes {
    pub fn len(&self) -> usize {
        self.idler.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idler.is_empty()
    }

    pub fn idler_grid(&self) -> &FrequencyGrid {
        &self.idler_grid
    }

    pub fn signal_grid(&self) -> &FrequencyGrid {
        &self.signal_grid
    }

    pub fn idler_mode(&self, k: usize) -> &[Complex64] {
        &self.idler[k]
    }

    pub fn signal_mode(&self, k: usize) -> &[Complex64] {
        &self.signal[k]
    }

    /// Σλ_kψ_i,kψ_s,k over the stored modes, row-major like the JSA.
    pub fn reconstruct(&self, spectrum: &SchmidtSpectrum) -> Vec<Complex64> {
        let (n_i, n_s) = (self.idler_grid.n_points(), self.signal_grid.n_points());
        let mut out = vec![Complex64::new(0.0, 0.0); n_i * n_s];
        for k in 0..self.len() {
            let lambda = spectrum.coefficients()[k];
            for a in 0..n_i {
                let left = self.idler[k][a] * lambda;
                for b in 0..n_s {
                    out[a * n_s + b] += left * self.signal[k][b];
                }
            }
        }
        out
    }
}

/// ⟨f, g⟩ = Σ f* g dω.
pub fn inner_product(f: &[Complex64], g: &[Complex64], spacing: f64) -> Complex64 {
    f.iter()
        .zip(g)
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        * spacing
}

fn check(jsa: &JointSpectralAmplitude) -> Result<()> {
    if !jsa.is_finite() {
        return Err(Error::NonFinite("joint spectral amplitude"));
    }
    if jsa.norm_sq() == 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    Ok(())
}

/// The kernel K = A·√(dω_i·dω_s) as a dense matrix.
pub fn scaled_kernel(jsa: &JointSpectralAmplitude) -> Mat<Complex64> {
    let weight = (jsa.idler_grid().spacing() * jsa.signal_grid().spacing()).sqrt();
    Mat::from_fn(jsa.n_idler(), jsa.n_signal(), |a, b| jsa.get(a, b) * weight)
}

struct ThinSvd {
    s: Vec<f64>,
    u: Mat<Complex64>,
    v: Mat<Complex64>,
}

fn thin_svd(k: MatRef<'_, Complex64>, vectors: bool) -> Result<ThinSvd> {
    let (m, n) = k.shape();
    let size = m.min(n);
    let compute = if vectors {
        ComputeSvdVectors::Thin
    } else {
        ComputeSvdVectors::No
    };
    let mut s = Diag::<Complex64>::zeros(size);
    let mut u =
        Mat::<Complex64>::zeros(if vectors { m } else { 0 }, if vectors { size } else { 0 });
    let mut v =
        Mat::<Complex64>::zeros(if vectors { n } else { 0 }, if vectors { size } else { 0 });
    // sequential so that results are bit-identical run to run
    let par = Par::Seq;
    let mut mem = MemBuffer::new(svd::svd_scratch::<Complex64>(
        m,
        n,
        compute,
        compute,
        par,
        Default::default(),
    ));
    svd::svd(
        k,
        s.as_mut(),
        vectors.then(|| u.as_mut()),
        vectors.then(|| v.as_mut()),
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|_| Error::SvdNoConvergence)?;
    let s = s.column_vector().iter().map(|x| x.re).collect();
    Ok(ThinSvd { s, u, v })
}

/// Orthonormalize the columns in place (Gram–Schmidt, two passes).
fn orthonormalize(q: &mut Mat<Complex64>) {
    let (m, r) = q.shape();
    for j in 0..r {
        for _ in 0..2 {
            for i in 0..j {
                let mut dot = Complex64::new(0.0, 0.0);
                for row in 0..m {
                    dot += q[(row, i)].conj() * q[(row, j)];
                }
                for row in 0..m {
                    let qi = q[(row, i)];
                    q[(row, j)] -= qi * dot;
                }
            }
        }
        let norm = (0..m).map(|row| q[(row, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for row in 0..m {
                q[(row, j)] /= norm;
            }
        }
    }
}

/// Deterministic pseudo-random test matrix (splitmix64 of the position).
fn test_matrix(rows: usize, cols: usize) -> Mat<Complex64> {
    let mix = |mut z: u64| {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    let unit = |z: u64| (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
    Mat::from_fn(rows, cols, |i, j| {
        let seed = ((i as u64) << 32) ^ j as u64;
        Complex64::new(unit(mix(2 * seed)), unit(mix(2 * seed + 1)))
    })
}

fn adjoint(a: MatRef<'_, Complex64>) -> Mat<Complex64> {
    Mat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

fn product(lhs: MatRef<'_, Complex64>, rhs: MatRef<'_, Complex64>) -> Mat<Complex64> {
    let mut out = Mat::<Complex64>::zeros(lhs.nrows(), rhs.ncols());
    matmul(
        out.as_mut(),
        Accum::Replace,
        lhs,
        rhs,
        Complex64::new(1.0, 0.0),
        Par::Seq,
    );
    out
}

fn truncated_singular_values(k: MatRef<'_, Complex64>, initial_rank: usize) -> Result<Vec<f64>> {
    let (m, n) = k.shape();
    let total: f64 = (0..n)
        .map(|j| (0..m).map(|i| k[(i, j)].norm_sqr()).sum::<f64>())
        .sum();
    let mut rank = initial_rank.max(1);
    while 2 * rank <= m.min(n) {
        let mut q = product(k, test_matrix(n, rank).as_ref());
        orthonormalize(&mut q);
        // one power iteration sharpens the captured subspace
        let mut z = product(adjoint(k).as_ref(), q.as_ref());
        orthonormalize(&mut z);
        q = product(k, z.as_ref());
        orthonormalize(&mut q);
        let projected = product(adjoint(q.as_ref()).as_ref(), k);
        let s = thin_svd(projected.as_ref(), false)?.s;
        let kept: f64 = s.iter().map(|x| x * x).sum();
        if total - kept <= TRUNCATION_ACCURACY * total {
            return Ok(s);
        }
        rank *= 2;
    }
    Ok(thin_svd(k, false)?.s)
}

/// Schmidt coefficients of `jsa` without modes.
pub fn schmidt_spectrum(
    jsa: &JointSpectralAmplitude,
    strategy: SvdStrategy,
) -> Result<SchmidtSpectrum> {
    check(jsa)?;
    let kernel = scaled_kernel(jsa);
    let s = match strategy {
        SvdStrategy::Full => thin_svd(kernel.as_ref(), false)?.s,
        SvdStrategy::Truncated { initial_rank } => {
            truncated_singular_values(kernel.as_ref(), initial_rank)?
        }
    };
    SchmidtSpectrum::from_coefficients(s)
}

/// Heralded single-photon purity Σλ⁴/(Σλ²)² from the full singular spectrum.
pub fn purity(jsa: &JointSpectralAmplitude) -> Result<f64> {
    Ok(schmidt_spectrum(jsa, SvdStrategy::Full)?.purity())
}

/// Full Schmidt spectrum plus the leading `n_modes` mode pairs.
pub fn decompose(
    jsa: &JointSpectralAmplitude,
    n_modes: usize,
) -> Result<(SchmidtSpectrum, SchmidtModes)> {
    check(jsa)?;
    let max_modes = jsa.n_idler().min(jsa.n_signal());
    if n_modes > max_modes {
        return Err(Error::InvalidParameter(format!(
            "requested {n_modes} Schmidt modes but the kernel has rank at most {max_modes}"
        )));
    }
    let ThinSvd { s, u, v } = thin_svd(scaled_kernel(jsa).as_ref(), true)?;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));

    let d_i = jsa.idler_grid().spacing().sqrt();
    let d_s = jsa.signal_grid().spacing().sqrt();
    let mut idler = Vec::with_capacity(n_modes);
    let mut signal = Vec::with_capacity(n_modes);
    for &col in order.iter().take(n_modes) {
        // K = U S V^H, so ψ_i = U/√dω_i and ψ_s = conj(V)/√dω_s
        let mut psi_i: Vec<Complex64> = (0..jsa.n_idler()).map(|a| u[(a, col)] / d_i).collect();
        let mut psi_s: Vec<Complex64> = (0..jsa.n_signal())
            .map(|b| v[(b, col)].conj() / d_s)
            .collect();
        let anchor = psi_s
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (b, x)| {
                if x.norm() > best.1 {
                    (b, x.norm())
                } else {
                    best
                }
            })
            .0;
        let gauge = Complex64::from_polar(1.0, psi_s[anchor].arg());
        psi_s.iter_mut().for_each(|x| *x /= gauge);
        psi_i.iter_mut().for_each(|x| *x *= gauge);
        idler.push(psi_i);
        signal.push(psi_s);
    }
    let spectrum = SchmidtSpectrum::from_coefficients(s)?;
    let modes = SchmidtModes {
        idler_grid: *jsa.idler_grid(),
        signal_grid: *jsa.signal_grid(),
        idler,
        signal,
    };
    Ok((spectrum, modes))
}
