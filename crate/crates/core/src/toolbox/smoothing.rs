use std::f64::consts::PI;

use super::{max_ratio, InequalityReport, Sample};
use crate::error::{Error, Result};
use crate::field::{from_physical, to_physical, PhysicalField};
use crate::grid::FrequencyGrid;
use crate::norms::check_exponent;
use crate::spectral::heat_factors;

/// Gaussians `exp(-|x - c|^2 / (2 w^2))` centred in the box, one per width.
pub fn gaussian_family(grid: &FrequencyGrid, widths: &[f64]) -> Vec<PhysicalField> {
    let c = 0.5 * grid.length();
    widths
        .iter()
        .map(|&w| {
            PhysicalField::from_fn(grid, |x| {
                let r2: f64 = x.iter().map(|xi| (xi - c).powi(2)).sum();
                (-r2 / (2.0 * w * w)).exp()
            })
        })
        .collect()
}

fn gaussian_lp(sigma: f64, p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        (2.0 * PI * sigma * sigma / p).powf(1.5 / p)
    }
}

/// Closed form of `||e^{t Delta} G_w||_q t^{(3/2)(1/p - 1/q)} / ||G_w||_p` on `R^3`.
pub fn gaussian_heat_ratio(w: f64, t: f64, p: f64, q: f64) -> f64 {
    let s2 = w * w + 2.0 * t;
    let amp = (w * w / s2).powf(1.5);
    amp * gaussian_lp(s2.sqrt(), q) / gaussian_lp(w, p) * t.powf(1.5 * (1.0 / p - 1.0 / q))
}

/// `C(t) = max_f ||e^{t Delta} f||_q t^{(3/2)(1/p-1/q)} / ||f||_p` per `t`.
/// Passes when the constants agree within `max_spread`; for `p = q` the cap
/// `1 + 1e-10` applies instead.
pub fn heat_smoothing_check(
    family: &[PhysicalField],
    p: f64,
    q: f64,
    t_list: &[f64],
    max_spread: f64,
) -> Result<InequalityReport> {
    check_exponent(p)?;
    check_exponent(q)?;
    if p > q {
        return Err(Error::ExponentOrder { p, q });
    }
    if t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    let expo = 1.5 * (1.0 / p - 1.0 / q);
    let mut samples = Vec::new();
    for &t in t_list {
        let mut best: Option<Sample> = None;
        for (k, f) in family.iter().enumerate() {
            let grid = &f.grid;
            let h = heat_factors(grid, t, 1.0);
            let c: Vec<_> = from_physical(f).iter().zip(&h).map(|(z, e)| z * e).collect();
            let lhs = to_physical(grid, &c).lp_norm(q) * t.powf(expo);
            let mut s = max_ratio("heat_smoothing", t, &[lhs], &[f.lp_norm(p)]);
            s.index = k;
            if best.as_ref().is_none_or(|b| s.ratio > b.ratio) {
                best = Some(s);
            }
        }
        samples.extend(best);
    }
    let id = format!("heat_smoothing({p},{q})");
    Ok(if p == q {
        InequalityReport::from_samples(&id, samples, Some(1.0 + 1e-10), None)
    } else {
        InequalityReport::from_samples(&id, samples, None, Some(max_spread))
    })
}
