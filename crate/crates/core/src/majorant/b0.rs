use rayon::prelude::*;

use super::MajorantTrajectory;
use crate::error::Result;
use crate::field::{clamp_roundoff, ClampStats, MajorantField};
use crate::grid::{FrequencyGrid, TimeGrid};
use crate::quadrature::b0_prefactor;
use crate::spectral::{convolve_majorants, heat_factors};

/// Trapezoid Duhamel sums with exact heat factors:
/// `I_m = e^{-nu h |xi|^2} I_{m-1} + (h/2)(e^{-nu h |xi|^2} c_{m-1} + c_m)`,
/// approximating `int_0^{t_m} e^{-nu (t_m - s)|xi|^2} c(s) ds`.
pub fn duhamel_trapezoid<T>(grid: &FrequencyGrid, time: TimeGrid, nu: f64, c: &[Vec<T>]) -> Vec<Vec<T>>
where
    T: Copy + Default + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let h = time.dt();
    let e = heat_factors(grid, h, nu);
    let mut out = Vec::with_capacity(c.len());
    out.push(vec![T::default(); grid.len()]);
    for m in 1..c.len() {
        let prev = &out[m - 1];
        let next: Vec<T> =
            (0..grid.len()).map(|i| prev[i] * e[i] + (c[m - 1][i] * e[i] + c[m][i]) * (0.5 * h)).collect();
        out.push(next);
    }
    out
}

/// `B0(W, V)(t, xi) = (18/(2 pi)^3) |xi| int_0^t e^{-nu (t-s)|xi|^2} (W(s) * V(s))(xi) ds`.
pub fn cheap_bilinear_b0(
    w: &MajorantTrajectory,
    v: &MajorantTrajectory,
    nu: f64,
) -> Result<(MajorantTrajectory, ClampStats)> {
    w.check_compatible(v)?;
    let grid = &w.grid;
    let convs: Vec<(MajorantField, ClampStats)> = w
        .values
        .par_iter()
        .zip(&v.values)
        .map(|(a, b)| if std::ptr::eq(a, b) { convolve_majorants(a, a) } else { convolve_majorants(a, b) })
        .collect::<Result<_>>()?;
    let mut stats = ClampStats::default();
    let c: Vec<Vec<f64>> = convs
        .into_iter()
        .map(|(f, s)| {
            stats.merge(s);
            f.values
        })
        .collect();
    let sums = duhamel_trapezoid(grid, w.time, nu, &c);
    let pref = b0_prefactor();
    let values = sums
        .into_iter()
        .map(|mut s| {
            s.iter_mut().enumerate().for_each(|(i, x)| *x *= pref * grid.xi_norm(i));
            stats.merge(clamp_roundoff(&mut s)?);
            Ok(MajorantField { grid: grid.clone(), values: s })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((MajorantTrajectory { grid: grid.clone(), time: w.time, values }, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn single_mode(grid: &FrequencyGrid, time: TimeGrid, c: f64) -> MajorantTrajectory {
        let i = grid.index_of_freq([1, 0, 0]).unwrap();
        let mut f = MajorantField::zeros(grid);
        f.values[i] = c;
        MajorantTrajectory::new(time, vec![f; time.samples()]).unwrap()
    }

    fn closed_form(grid: &FrequencyGrid, c: f64, t: f64) -> f64 {
        let k = 2.0 * grid.dxi();
        b0_prefactor() * k * c * c * grid.dxi3() * (1.0 - (-t * k * k).exp()) / (k * k)
    }

    #[test]
    fn single_mode_closed_form() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let time = TimeGrid::new_even(1.0, 64).unwrap();
        let w = single_mode(&grid, time, 0.3);
        let (b, stats) = cheap_bilinear_b0(&w, &w, 1.0).unwrap();
        let j = grid.index_of_freq([2, 0, 0]).unwrap();
        let exact = closed_form(&grid, 0.3, 1.0);
        assert!((b.values[64].values[j] - exact).abs() <= 1e-3 * exact);
        assert_eq!(stats.count, 0);
        // only the doubled frequency is excited
        let others: f64 = b.values[64].values.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, v)| *v).sum();
        assert!(others <= 1e-14 * exact);
    }

    #[test]
    fn richardson_ratio() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let j = grid.index_of_freq([2, 0, 0]).unwrap();
        let exact = closed_form(&grid, 0.3, 1.0);
        let err = |m: usize| {
            let time = TimeGrid::new_even(1.0, m).unwrap();
            let w = single_mode(&grid, time, 0.3);
            let (b, _) = cheap_bilinear_b0(&w, &w, 1.0).unwrap();
            (b.values[m].values[j] - exact).abs()
        };
        let r = err(16) / err(32);
        assert!((3.5..=4.5).contains(&r), "ratio {r}");
    }

    #[test]
    fn zero_argument() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let time = TimeGrid::new_even(1.0, 8).unwrap();
        let w = single_mode(&grid, time, 1.0);
        let z = MajorantTrajectory::zeros(&grid, time);
        let (b, _) = cheap_bilinear_b0(&w, &z, 1.0).unwrap();
        assert_eq!(b.sup(), 0.0);
    }
}
