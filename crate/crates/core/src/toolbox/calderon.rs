use std::f64::consts::PI;

use serde::Serialize;

use super::{circular_convolve, radial_kernel};
use crate::error::{Error, Result};
use crate::field::PhysicalField;
use crate::quadrature::riesz_normalizer;

/// `C''` for `U = U0 + C'' I_alpha(U^2)` with the heat-kernel bound's constant
/// set to one: `int_0^inf (sqrt(sigma) + r)^{-(5-alpha)} d sigma = kappa r^{alpha-3}`,
/// `kappa = 2/((4-alpha)(3-alpha))`, so `C'' = kappa / c_alpha`.
pub fn default_c2(alpha: f64) -> f64 {
    2.0 / ((4.0 - alpha) * (3.0 - alpha) * riesz_normalizer(alpha))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CalderonOptions {
    pub alpha: f64,
    pub c2: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub blowup_factor: f64,
}

impl Default for CalderonOptions {
    fn default() -> Self {
        Self { alpha: 0.5, c2: default_c2(0.5), tol: 1e-12, max_iter: 500, blowup_factor: 1e6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CalderonStatus {
    Converged,
    Divergent,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalderonResult {
    pub status: CalderonStatus,
    pub iterations: usize,
    pub increments: Vec<f64>,
    #[serde(skip)]
    pub solution: Vec<f64>,
    pub sup: f64,
}

/// Lattice `I_alpha` kernel `c_alpha |x|^{alpha-3} dx^3`; the origin cell carries
/// the integral over the ball of equal volume, `4 pi c_alpha R^alpha / alpha`.
fn riesz_kernel(grid: &crate::grid::FrequencyGrid, alpha: f64) -> Vec<f64> {
    let c = riesz_normalizer(alpha);
    let r = grid.dx() * (3.0 / (4.0 * PI)).cbrt();
    radial_kernel(grid, |d| c * d.powf(alpha - 3.0), Some(4.0 * PI * c * r.powf(alpha) / alpha))
}

/// Picard iteration `U^{k+1} = U0 + C'' I_alpha((U^k)^2)` with a positive
/// physical-space kernel.
pub fn calderon_cheap_solve(u0: &PhysicalField, opts: CalderonOptions) -> Result<CalderonResult> {
    if !(opts.alpha > 0.0 && opts.alpha < 3.0) {
        return Err(Error::RieszOrderOutOfRange(opts.alpha));
    }
    if !(opts.c2 >= 0.0) {
        return Err(Error::InvalidParameter(format!("C'' = {}", opts.c2)));
    }
    let base = u0.real();
    if let Some(v) = base.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::NegativeMajorant { value: *v, floor: 0.0 });
    }
    let grid = &u0.grid;
    let kernel = riesz_kernel(grid, opts.alpha);
    let s0 = base.iter().cloned().fold(0.0, f64::max);
    let mut u = base.clone();
    let mut increments = Vec::new();
    for k in 1..=opts.max_iter {
        let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
        let conv = circular_convolve(grid, &kernel, &sq);
        let next: Vec<f64> = base.iter().zip(&conv).map(|(b, c)| b + opts.c2 * c.max(0.0)).collect();
        let inc = next.iter().zip(&u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let sup = next.iter().cloned().fold(0.0, f64::max);
        increments.push(inc);
        u = next;
        if !sup.is_finite() || sup > opts.blowup_factor * s0 {
            return Ok(CalderonResult {
                status: CalderonStatus::Divergent,
                iterations: k,
                increments,
                solution: u,
                sup,
            });
        }
        if inc <= opts.tol * sup {
            return Ok(CalderonResult {
                status: CalderonStatus::Converged,
                iterations: k,
                increments,
                solution: u,
                sup,
            });
        }
    }
    let sup = u.iter().cloned().fold(0.0, f64::max);
    Ok(CalderonResult { status: CalderonStatus::Divergent, iterations: opts.max_iter, increments, solution: u, sup })
}

/// Geometric bisection for the amplitude separating convergence from divergence.
/// Returns `(largest converging, smallest diverging)`.
pub fn calderon_bisect(
    profile: impl Fn(f64) -> PhysicalField,
    opts: CalderonOptions,
    lo: f64,
    hi: f64,
    ratio: f64,
) -> Result<(f64, f64)> {
    let converges =
        |a: f64| -> Result<bool> { Ok(calderon_cheap_solve(&profile(a), opts)?.status == CalderonStatus::Converged) };
    if !converges(lo)? || converges(hi)? {
        return Err(Error::PreconditionNotMet(format!("[{lo}, {hi}] does not bracket the boundary")));
    }
    let (mut below, mut above) = (lo, hi);
    while above / below > ratio {
        let mid = (below * above).sqrt();
        if converges(mid)? {
            below = mid;
        } else {
            above = mid;
        }
    }
    Ok((below, above))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FrequencyGrid;

    #[test]
    fn zero_data() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let r = calderon_cheap_solve(&PhysicalField::from_fn(&grid, |_| 0.0), Default::default()).unwrap();
        assert_eq!(r.status, CalderonStatus::Converged);
        assert_eq!(r.sup, 0.0);
    }

    #[test]
    fn default_constant_at_one() {
        // alpha = 1: kappa = 1/3 and c_1 = 1/(2 pi^2)
        assert!((default_c2(1.0) - 2.0 * PI * PI / 3.0).abs() < 1e-12);
    }
}
