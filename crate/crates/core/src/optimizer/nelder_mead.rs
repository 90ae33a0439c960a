//! Minimal Nelder–Mead simplex minimizer. Infeasible points are expected to
//! return +∞, which the simplex treats as worse than any finite value.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadSettings {
    pub max_evaluations: usize,
    /// Convergence needs the spread of simplex values at most `f_tolerance`
    /// and every vertex within `x_tolerance` of the best one.
    pub f_tolerance: f64,
    pub x_tolerance: f64,
}

impl Default for NelderMeadSettings {
    fn default() -> Self {
        Self {
            max_evaluations: 200,
            f_tolerance: 1e-10,
            x_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOutcome {
    pub best: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Best vertex after each iteration.
    pub trace: Vec<(Vec<f64>, f64)>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimize `f` from `start`, whose value `f_start` is already known.
///
/// The initial simplex steps by `steps[i]` along each axis; a step landing
/// on an infinite value is retried in the opposite direction. The best
/// vertex never gets worse, so the result is at least as good as `start`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    f_start: f64,
    steps: &[f64],
    settings: &NelderMeadSettings,
) -> NelderMeadOutcome {
    let dim = start.len();
    assert_eq!(steps.len(), dim, "one step per coordinate");
    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.to_vec(), f_start)];
    for i in 0..dim {
        let mut x = start.to_vec();
        x[i] += steps[i];
        let mut v = eval(&x, &mut evaluations);
        if v.is_infinite() {
            x[i] = start[i] - steps[i];
            v = eval(&x, &mut evaluations);
        }
        simplex.push((x, v));
    }

    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        trace.push(simplex[0].clone());
        let spread = simplex[dim].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| distance(x, &simplex[0].0))
            .fold(0.0, f64::max);
        if spread <= settings.f_tolerance && size <= settings.x_tolerance {
            converged = true;
            break;
        }
        if evaluations >= settings.max_evaluations {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|i| simplex[..dim].iter().map(|(x, _)| x[i]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(REFLECT);
        let fr = eval(&xr, &mut evaluations);
        if fr < simplex[0].1 {
            let xe = along(EXPAND);
            let fe = eval(&xe, &mut evaluations);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = along(REFLECT * CONTRACT);
            let fc = eval(&xc, &mut evaluations);
            (xc, fc)
        } else {
            let xc = along(-CONTRACT);
            let fc = eval(&xc, &mut evaluations);
            (xc, fc)
        };
        if fc < fr.min(worst.1) {
            simplex[dim] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + SHRINK * (v - b))
                .collect();
            let v = eval(&x, &mut evaluations);
            *vertex = (x, v);
        }
    }
    let (best, value) = simplex.swap_remove(0);
    NelderMeadOutcome {
        best,
        value,
        evaluations,
        iterations,
        converged,
        trace,
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
