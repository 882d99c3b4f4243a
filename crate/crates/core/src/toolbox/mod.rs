//! Real-variable audits: maximal function, radial-kernel domination, heat
//! smoothing, Hedberg, the 1D splitting identity and the Calderón equation.

mod calderon;
mod hedberg;
mod maximal;
mod radial;
mod smoothing;
mod splitting;

pub use calderon::{
    calderon_bisect, calderon_cheap_solve, default_c2, CalderonOptions, CalderonResult, CalderonStatus,
};
pub use hedberg::{gn_exponent, hedberg_verify, reconstruction_error, HedbergOptions, HedbergReport};
pub use maximal::{default_radii, maximal_function, MaximalField};
pub use radial::{domination_slack, radial_domination_check, KernelId, SlackReport};
pub use smoothing::{gaussian_family, gaussian_heat_ratio, heat_smoothing_check};
pub use splitting::{splitting_identity_check, SplittingReport};

use num_complex::Complex64;
use serde::Serialize;

use crate::fft::{fft3, Direction};
use crate::grid::FrequencyGrid;

/// One evaluated sample of an inequality `lhs <= C rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub label: String,
    pub param: f64,
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub inequality_id: String,
    /// The maximizing sample for each parameter value.
    pub samples: Vec<Sample>,
    /// `max ratio` over all samples.
    pub empirical_constant: f64,
    pub argmax: Option<Sample>,
    /// `max / min - 1` of the per-parameter constants.
    pub spread: f64,
    pub cap: Option<f64>,
    pub pass: bool,
}

impl InequalityReport {
    /// Build from per-parameter maximizing samples; `pass` requires finite
    /// ratios, the cap (if any) and `spread <= max_spread` (if given).
    pub fn from_samples(id: &str, samples: Vec<Sample>, cap: Option<f64>, max_spread: Option<f64>) -> Self {
        let argmax = samples.iter().filter(|s| s.ratio.is_finite()).max_by(|a, b| a.ratio.total_cmp(&b.ratio)).cloned();
        let empirical_constant = argmax.as_ref().map_or(0.0, |s| s.ratio);
        let ratios: Vec<f64> = samples.iter().map(|s| s.ratio).collect();
        let hi = ratios.iter().cloned().fold(0.0, f64::max);
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let spread = if hi == 0.0 { 0.0 } else { hi / lo - 1.0 };
        let finite = ratios.iter().all(|r| r.is_finite() && *r >= 0.0);
        let pass = finite && cap.is_none_or(|c| empirical_constant <= c) && max_spread.is_none_or(|m| spread <= m);
        Self { inequality_id: id.into(), samples, empirical_constant, argmax, spread, cap, pass }
    }
}

/// Largest `lhs/rhs` over points (ratios with `rhs == 0` count only if `lhs > 0`).
pub(crate) fn max_ratio(label: &str, param: f64, lhs: &[f64], rhs: &[f64]) -> Sample {
    let mut best = Sample { label: label.into(), param, index: 0, lhs: 0.0, rhs: 0.0, ratio: 0.0 };
    for (i, (l, r)) in lhs.iter().zip(rhs).enumerate() {
        let ratio = if *r > 0.0 {
            l / r
        } else if *l > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        if ratio > best.ratio {
            best = Sample { label: label.into(), param, index: i, lhs: *l, rhs: *r, ratio };
        }
    }
    best
}

/// Minimum-image distance of lattice offset index `idx` from the origin.
pub(crate) fn offset_distance(grid: &FrequencyGrid, idx: usize) -> f64 {
    let n = grid.n();
    let [a, b, c] = grid.unravel(idx).map(|i| {
        let s = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
        s * grid.dx()
    });
    (a * a + b * b + c * c).sqrt()
}

/// `sum_y K(x - y) f(y)` with `K` given on the physical lattice (circular).
pub(crate) fn circular_convolve(grid: &FrequencyGrid, kernel: &[f64], f: &[f64]) -> Vec<f64> {
    let n = grid.n();
    let mut a: Vec<Complex64> = kernel.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    let mut b: Vec<Complex64> = f.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    fft3(&mut a, n, Direction::Forward);
    fft3(&mut b, n, Direction::Forward);
    let mut p: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    fft3(&mut p, n, Direction::Inverse);
    let s = 1.0 / grid.len() as f64;
    p.iter().map(|z| z.re * s).collect()
}

/// Lattice kernel `k(|x|) dx^3` by minimum image, with `self_weight` at the origin.
pub(crate) fn radial_kernel(grid: &FrequencyGrid, k: impl Fn(f64) -> f64, self_weight: Option<f64>) -> Vec<f64> {
    (0..grid.len())
        .map(|i| {
            if i == 0 {
                if let Some(w) = self_weight {
                    return w;
                }
            }
            k(offset_distance(grid, i)) * grid.dx3()
        })
        .collect()
}

/// Real part of spectral coefficients multiplied by `symbol(xi)`, in physical space.
pub(crate) fn apply_symbol(
    grid: &FrequencyGrid,
    coeffs: &[Complex64],
    symbol: impl Fn([f64; 3]) -> Complex64,
) -> Vec<f64> {
    let c: Vec<Complex64> = coeffs.iter().enumerate().map(|(i, z)| z * symbol(grid.xi(i))).collect();
    crate::field::to_physical(grid, &c).real()
}
