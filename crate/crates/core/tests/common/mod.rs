//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use ringpair::{Complex64, FrequencyGrid, JointSpectralAmplitude};

/// Purity from the reduced density operator: with G = A·A†,
/// P = Tr(G²)/Tr(G)². Grid weights cancel in the ratio.
pub fn density_operator_purity(jsa: &JointSpectralAmplitude) -> f64 {
    let (n_i, n_s) = (jsa.n_idler(), jsa.n_signal());
    let a = jsa.values();
    let mut trace = 0.0;
    let mut trace_sq = 0.0;
    for p in 0..n_i {
        let row_p = &a[p * n_s..(p + 1) * n_s];
        trace += row_p.iter().map(|v| v.norm_sqr()).sum::<f64>();
        for q in 0..n_i {
            let row_q = &a[q * n_s..(q + 1) * n_s];
            let g: Complex64 = row_p.iter().zip(row_q).map(|(x, y)| x * y.conj()).sum();
            trace_sq += g.norm_sqr();
        }
    }
    trace_sq / (trace * trace)
}

/// √η + e^{iφ}e^{−iΔτω}√(1−η) times exp(−τ²ω²/2), written out directly.
pub fn dual_pulse_envelope(omega: f64, tau: f64, eta: f64, delta_tau: f64, phi: f64) -> Complex64 {
    let gauss = (-0.5 * tau * tau * omega * omega).exp();
    let second = Complex64::new(0.0, phi - delta_tau * omega).exp() * (1.0 - eta).sqrt();
    (Complex64::new(eta.sqrt(), 0.0) + second) * gauss
}

/// 1/(γ + i(ω − δ)) with γ = 1/2 (unit linewidth).
pub fn unit_lorentzian(omega: f64, detuning: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) / Complex64::new(0.5, omega - detuning)
}

/// ∫A(ω′)A(ω − ω′)dω′ by the trapezoid rule on the samples of `field`
/// (uniform spacing `h`), at every point of the 2n − 1 lattice.
pub fn trapezoid_self_convolution(field: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = field.len();
    (0..2 * n - 1)
        .map(|k| {
            let lo = k.saturating_sub(n - 1);
            let hi = k.min(n - 1);
            let mut sum = Complex64::new(0.0, 0.0);
            for j in lo..=hi {
                let w = if lo != hi && (j == lo || j == hi) {
                    0.5
                } else {
                    1.0
                };
                sum += field[j] * field[k - j] * w;
            }
            sum * h
        })
        .collect()
}

/// Random JSA: a sum of a few random separable terms plus noise, so the
/// purity spreads over (0, 1].
pub fn random_jsa<R: Rng>(rng: &mut R, n: usize) -> JointSpectralAmplitude {
    let half_width = rng.random_range(1.0..20.0);
    let grid = FrequencyGrid::new(rng.random_range(-2.0..2.0), half_width, n).unwrap();
    let terms = rng.random_range(1..6);
    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    let vector = |rng: &mut R| -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    };
    for _ in 0..terms {
        let weight = rng.random_range(0.05..1.0);
        let (u, v) = (vector(rng), vector(rng));
        for a in 0..n {
            for b in 0..n {
                values[a * n + b] += u[a] * v[b] * weight;
            }
        }
    }
    let noise = rng.random_range(0.0..0.3);
    for v in &mut values {
        *v += Complex64::new(
            rng.random_range(-noise..=noise),
            rng.random_range(-noise..=noise),
        );
    }
    JointSpectralAmplitude::new(grid, grid, values).unwrap()
}

pub fn max_relative_difference(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}
