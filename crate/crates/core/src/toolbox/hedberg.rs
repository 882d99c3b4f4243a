use serde::Serialize;
use statrs::function::gamma::gamma;

use super::{apply_symbol, max_ratio, maximal_function, InequalityReport};
use crate::error::{Error, Result};
use crate::field::{from_physical, to_physical, PhysicalField};
use crate::norms::{besov_minus, check_exponent, ThermicParams, ThermicValue};

/// `q` with `1/q = (beta/(alpha+beta)) (1/p)`.
pub fn gn_exponent(alpha: f64, beta: f64, p: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha}, beta = {beta}")));
    }
    if !(p > 1.0) {
        return Err(Error::ExponentOutOfRange(p));
    }
    Ok(if p.is_infinite() { f64::INFINITY } else { p * (alpha + beta) / beta })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HedbergOptions {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    /// Upper end of the thermic sup.
    pub t_max: f64,
    pub t_min: f64,
    pub per_decade: usize,
    /// Maximal-function radii; `None` uses the default ladder.
    pub radii: Option<Vec<f64>>,
}

impl HedbergOptions {
    pub fn new(alpha: f64, beta: f64, p: f64) -> Self {
        Self { alpha, beta, p, t_max: 10.0, t_min: 1e-5, per_decade: 32, radii: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HedbergReport {
    pub q: f64,
    /// `|f(x)| <= C M_{(sqrt(-Delta))^alpha f}(x)^{theta} ||f||_{B^{-beta}}^{1-theta}`, `theta = beta/(alpha+beta)`.
    pub pointwise: InequalityReport,
    /// `||f||_q` against `||(sqrt(-Delta))^alpha f||_p^theta ||f||_{B^{-beta}}^{1-theta}`.
    pub gn_lhs: f64,
    pub gn_rhs: f64,
    pub gn_ratio: f64,
    pub besov: ThermicValue,
    /// `max |f - quadrature reconstruction| / max |f|` with `N = 2`.
    pub reconstruction_error: f64,
    /// True when `f = 0` (nothing to compare).
    pub skipped: bool,
}

/// `f` against `((-1)^N / Gamma(N)) int (t Delta)^N e^{t Delta} f dt/t`, trapezoid in
/// `log t` with `per_decade` nodes per decade on `[t_lo, t_hi]`. Returns
/// `max |difference| / max |f|`.
pub fn reconstruction_error(f: &PhysicalField, order: i32, t_lo: f64, t_hi: f64, per_decade: usize) -> f64 {
    let grid = &f.grid;
    let coeffs = from_physical(f);
    let (u0, u1) = (t_lo.ln(), t_hi.ln());
    let count = ((t_hi / t_lo).log10() * per_decade as f64).round() as usize;
    let h = (u1 - u0) / count as f64;
    let g = gamma(order as f64);
    let mult: Vec<f64> = grid
        .norm_sq()
        .iter()
        .map(|k2| {
            (0..=count)
                .map(|i| {
                    let x = (u0 + h * i as f64).exp() * k2;
                    let w = if i == 0 || i == count { 0.5 * h } else { h };
                    w * x.powi(order) * (-x).exp()
                })
                .sum::<f64>()
                / g
        })
        .collect();
    let rec: Vec<_> = coeffs.iter().zip(&mult).map(|(c, m)| c * m).collect();
    let back = to_physical(grid, &rec).real();
    let orig = f.real();
    let scale = orig.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    back.iter().zip(&orig).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
}

/// Pointwise Hedberg ratio, the refined Gagliardo–Nirenberg norms and the
/// reconstruction identity for a zero-mean band-limited `f`.
pub fn hedberg_verify(f: &PhysicalField, opts: &HedbergOptions) -> Result<HedbergReport> {
    let q = gn_exponent(opts.alpha, opts.beta, opts.p)?;
    check_exponent(opts.p)?;
    let grid = &f.grid;
    let coeffs = from_physical(f);
    let scale = f.max_abs();
    if coeffs[0].norm() > 1e-12 * scale * grid.length().powi(3) {
        return Err(Error::PreconditionNotMet("f must have zero mean".into()));
    }
    let thermic =
        ThermicParams { t_min: opts.t_min, t_max: opts.t_max, per_decade: opts.per_decade, beta: opts.beta, nu: 1.0 };
    thermic.validate()?;
    let besov = besov_minus(grid, std::slice::from_ref(&coeffs), &thermic);
    let theta = opts.beta / (opts.alpha + opts.beta);
    let a = opts.alpha;
    let g = PhysicalField::from_real(
        grid,
        apply_symbol(grid, &coeffs, |xi| (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).powf(0.5 * a).into()),
    )?;
    let radii = opts.radii.clone().unwrap_or_else(|| super::default_radii(grid));
    let m = maximal_function(&g, &radii)?;
    let rhs: Vec<f64> = m.values.iter().map(|v| v.powf(theta) * besov.value.powf(1.0 - theta)).collect();
    let skipped = scale == 0.0;
    let sample = max_ratio("hedberg", grid.n() as f64, &f.abs(), &rhs);
    let pointwise = InequalityReport::from_samples("hedberg", vec![sample], None, None);
    let gn_lhs = f.lp_norm(q);
    let gn_rhs = g.lp_norm(opts.p).powf(theta) * besov.value.powf(1.0 - theta);
    let gn_ratio = if gn_rhs > 0.0 { gn_lhs / gn_rhs } else { 0.0 };
    let reconstruction_error = reconstruction_error(f, 2, 1e-6, 1e3, 64);
    Ok(HedbergReport { q, pointwise, gn_lhs, gn_rhs, gn_ratio, besov, reconstruction_error, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_law() {
        assert_eq!(gn_exponent(1.0, 1.0, 2.0).unwrap(), 4.0);
        assert!(gn_exponent(1.0, 1.0, 1.0).is_err());
        assert_eq!(gn_exponent(1.0, 2.0, f64::INFINITY).unwrap(), f64::INFINITY);
    }
}
