use std::f64::consts::E;

use serde::Serialize;

use super::{gevrey_radius, CoupledResult};
use crate::error::{Error, Result};
use crate::field::{MajorantField, SpectralVectorField};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GevreyReport {
    /// `max_{t,xi} (|U(t,xi)| - e^{-sqrt(t)|xi|} W(t/2,xi) / (2 sqrt(e)))`
    pub max_excess: f64,
    /// Largest `lhs / rhs` over samples with `rhs > 1e-12 * scale`.
    pub tightest_ratio: f64,
    pub scale: f64,
    pub pass: bool,
    /// `(t, r(t))`; `None` where no mode clears the noise floor.
    pub radius: Vec<(f64, Option<f64>)>,
    /// Whether `r(t)` is nondecreasing on `[T/4, T]` (report only).
    pub radius_nondecreasing: bool,
    /// Sampled `sup_{z >= 0} e^{z - z^2/2}`.
    pub sqrt_e_sampled: f64,
}

/// `sup_{z in [0, 10]} e^{z - z^2/2}` on a uniform grid of `samples` intervals.
pub fn sqrt_e_check(samples: usize) -> f64 {
    (0..=samples)
        .map(|i| {
            let z = 10.0 * i as f64 / samples as f64;
            (z - 0.5 * z * z).exp()
        })
        .fold(0.0, f64::max)
}

/// Check `|U(t,xi)| <= (1/(2 sqrt e)) e^{-sqrt(t)|xi|} W(t/2, xi)` at every stored
/// sample of a coupled run started from data with `|U0| <= W0 / (2e)`.
/// At odd sample indices `W(t/2)` is interpolated linearly in time.
pub fn gevrey_verify(u0: &SpectralVectorField, w0: &MajorantField, run: &CoupledResult) -> Result<GevreyReport> {
    let bound = w0.max() / (2.0 * E);
    let pre = (0..u0.grid.len()).map(|i| u0.modulus_at(i) - w0.values[i] / (2.0 * E)).fold(0.0, f64::max);
    if pre > 1e-12 * bound {
        return Err(Error::PreconditionNotMet(format!("|U0| exceeds W0/(2e) by {pre:e}")));
    }
    let u = &run.solution;
    let w = &run.majorant;
    let grid = &u.grid;
    let scale = w.sup();
    let c = 0.5 / E.sqrt();
    let mut max_excess = f64::NEG_INFINITY;
    let mut tightest = 0.0f64;
    for (m, t) in u.time.times().into_iter().enumerate() {
        let half = if m % 2 == 0 { w.values[m / 2].clone() } else { w.at_time(0.5 * t) };
        let st = t.sqrt();
        for i in 0..grid.len() {
            let lhs = u.fields[m].modulus_at(i);
            let rhs = c * (-st * grid.xi_norm(i)).exp() * half.values[i];
            max_excess = max_excess.max(lhs - rhs);
            if rhs > 1e-12 * scale {
                tightest = tightest.max(lhs / rhs);
            }
        }
    }
    let usup = u.sup_modulus();
    let radius: Vec<(f64, Option<f64>)> =
        u.time.times().into_iter().zip(&u.fields).map(|(t, f)| (t, gevrey_radius(f, usup))).collect();
    let t_end = u.time.t_end;
    let tail: Vec<f64> = radius.iter().filter(|(t, _)| *t >= 0.25 * t_end).filter_map(|(_, r)| *r).collect();
    let radius_nondecreasing = tail.windows(2).all(|p| p[1] >= p[0] - 1e-9 * p[0].abs());
    let sqrt_e_sampled = sqrt_e_check(1_000_000);
    let pass = max_excess <= 1e-10 * scale && (sqrt_e_sampled - E.sqrt()).abs() <= 1e-8;
    Ok(GevreyReport { max_excess, tightest_ratio: tightest, scale, pass, radius, radius_nondecreasing, sqrt_e_sampled })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_e_on_grid() {
        assert!((sqrt_e_check(1_000_000) - E.sqrt()).abs() < 1e-8);
    }
}
