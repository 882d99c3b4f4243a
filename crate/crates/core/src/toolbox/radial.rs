use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use super::{apply_symbol, circular_convolve, max_ratio, maximal_function, radial_kernel, InequalityReport};
use crate::error::{Error, Result};
use crate::field::PhysicalField;
use crate::quadrature::integrate_to_infinity;

/// Pointwise heat-kernel bounds `|T_t f| <= C int k_t(|x-y|) |f(y)| dy`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelId {
    /// `e^{t Delta}` against `sqrt(t) (sqrt(t) + r)^{-4}`.
    Heat,
    /// `e^{t Delta}(-Delta)^{1/4}` against `(sqrt(t) + r)^{-7/2}`.
    HeatQuarter,
    /// `e^{t Delta}(-Delta)^{1/4} R_j R_k d_l` against `(sqrt(t) + r)^{-4}` (literal exponent).
    Calderon4,
    /// `e^{t Delta}(-Delta)^{-1/4} R_j R_k d_l` against `(sqrt(t) + r)^{-7/2}`
    /// (the dimensionally consistent reading).
    Calderon72,
    /// `(-Delta)^{-1/4}` against `|x|^{-5/2}` (no `t`).
    RieszHalf,
}

impl KernelId {
    pub const ALL: [KernelId; 5] =
        [KernelId::Heat, KernelId::HeatQuarter, KernelId::Calderon4, KernelId::Calderon72, KernelId::RieszHalf];

    fn kernel(self, t: f64) -> impl Fn(f64) -> f64 {
        let st = t.sqrt();
        move |r: f64| match self {
            KernelId::Heat => st * (st + r).powi(-4),
            KernelId::HeatQuarter | KernelId::Calderon72 => (st + r).powf(-3.5),
            KernelId::Calderon4 => (st + r).powi(-4),
            KernelId::RieszHalf => r.powf(-2.5),
        }
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KernelId::Heat => "heat",
            KernelId::HeatQuarter => "heat_quarter",
            KernelId::Calderon4 => "calderon_4",
            KernelId::Calderon72 => "calderon_72",
            KernelId::RieszHalf => "riesz_half",
        };
        f.write_str(s)
    }
}

impl FromStr for KernelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        KernelId::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown kernel '{s}'")))
    }
}

fn lhs(kernel: KernelId, f: &PhysicalField, t: f64) -> Vec<f64> {
    let grid = &f.grid;
    let coeffs = crate::field::from_physical(f);
    let heat = move |xi: [f64; 3]| (-t * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2])).exp();
    let norm = |xi: [f64; 3]| (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
    match kernel {
        KernelId::Heat => apply_symbol(grid, &coeffs, |xi| heat(xi).into()).iter().map(|v| v.abs()).collect(),
        KernelId::HeatQuarter => {
            apply_symbol(grid, &coeffs, |xi| (heat(xi) * norm(xi).sqrt()).into()).iter().map(|v| v.abs()).collect()
        }
        KernelId::RieszHalf => apply_symbol(grid, &coeffs, |xi| {
            let r = norm(xi);
            if r == 0.0 { 0.0 } else { r.powf(-0.5) }.into()
        })
        .iter()
        .map(|v| v.abs())
        .collect(),
        KernelId::Calderon4 | KernelId::Calderon72 => {
            let power = if kernel == KernelId::Calderon4 { 0.5 } else { -0.5 };
            let mut best = vec![0.0f64; grid.len()];
            for j in 0..3 {
                for k in j..3 {
                    for l in 0..3 {
                        let v = apply_symbol(grid, &coeffs, |xi| {
                            let r = norm(xi);
                            if r == 0.0 {
                                return Complex64::new(0.0, 0.0);
                            }
                            // R_j R_k = -xi_j xi_k / |xi|^2, d_l = i xi_l
                            let m = heat(xi) * r.powf(power) * (-xi[j] * xi[k] / (r * r));
                            Complex64::new(0.0, m * xi[l])
                        });
                        best.iter_mut().zip(&v).for_each(|(b, x)| *b = b.max(x.abs()));
                    }
                }
            }
            best
        }
    }
}

fn rhs(kernel: KernelId, f: &PhysicalField, t: f64) -> Vec<f64> {
    let grid = &f.grid;
    let self_weight = (kernel == KernelId::RieszHalf).then(|| {
        // int_{|x| < R} |x|^{-5/2} dx over the ball with the cell's volume
        let r = grid.dx() * (3.0 / (4.0 * PI)).cbrt();
        8.0 * PI * r.sqrt()
    });
    let k = radial_kernel(grid, kernel.kernel(t), self_weight);
    circular_convolve(grid, &k, &f.abs())
}

/// Empirical constants of a heat-kernel bound across `t_list`. Passes when
/// the per-`t` constants agree within `max_spread` (relative).
pub fn radial_domination_check(
    kernel: KernelId,
    f: &PhysicalField,
    t_list: &[f64],
    max_spread: f64,
) -> Result<InequalityReport> {
    if t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    let ts: Vec<f64> = if kernel == KernelId::RieszHalf { vec![0.0] } else { t_list.to_vec() };
    let samples =
        ts.iter().map(|&t| max_ratio(&kernel.to_string(), t, &lhs(kernel, f, t), &rhs(kernel, f, t))).collect();
    Ok(InequalityReport::from_samples(&format!("calderon_{kernel}"), samples, None, Some(max_spread)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlackReport {
    pub n: usize,
    pub kernel_l1: f64,
    /// `max_x |k * f|(x) / (||k||_1 M_f(x))`
    pub max_ratio: f64,
    /// `max(max_ratio - 1, 0)`
    pub delta: f64,
    pub index: usize,
}

/// Discretization slack `delta` in `|k * f| <= ||k||_1 M_f (1 + delta)` for a
/// radial nonincreasing kernel `k(r)`; `k * f` is the lattice sum, `||k||_1`
/// the integral over `R^3`, `M_f` the maximal function over `radii`.
pub fn domination_slack(k: impl Fn(f64) -> f64 + Copy, f: &PhysicalField, radii: &[f64]) -> Result<SlackReport> {
    let grid = &f.grid;
    let kernel_l1 = integrate_to_infinity(|r| 4.0 * PI * r * r * k(r), 0.0, 1e-12);
    let kern = radial_kernel(grid, k, None);
    let conv = circular_convolve(grid, &kern, &f.real());
    let m = maximal_function(f, radii)?;
    let rhs: Vec<f64> = m.values.iter().map(|v| kernel_l1 * v).collect();
    let lhs: Vec<f64> = conv.iter().map(|v| v.abs()).collect();
    let s = max_ratio("slack", 0.0, &lhs, &rhs);
    Ok(SlackReport { n: grid.n(), kernel_l1, max_ratio: s.ratio, delta: (s.ratio - 1.0).max(0.0), index: s.index })
}
