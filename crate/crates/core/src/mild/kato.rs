use num_complex::Complex64;
use serde::Serialize;

use super::{energy_enstrophy, nonlinear_term, BilinearForm, SolutionTrajectory};
use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::TimeGrid;
use crate::spectral::heat_factors;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KatoOptions {
    pub nu: f64,
    /// `false` drops `B` and leaves pure heat flow.
    pub nonlinear: bool,
    pub inner_max: usize,
    pub inner_tol: f64,
    pub form: BilinearForm,
}

impl Default for KatoOptions {
    fn default() -> Self {
        Self { nu: 1.0, nonlinear: true, inner_max: 20, inner_tol: 1e-14, form: BilinearForm::PhysicalDuhamel }
    }
}

fn axpy(a: &[Complex64], s: f64, b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x + y * s).collect()
}

/// Time marching for `u = e^{nu t Delta}u0 - B(u,u)`: the Duhamel integral is
/// carried as `I_m = e^{-nu h|xi|^2} I_{m-1} + (h/2)(e^{-nu h|xi|^2} c_{m-1} + c_m)`,
/// and the implicit `c_m = c(U_m)` is closed by Picard iteration within the step.
pub fn kato_solve(u0: &SpectralVectorField, time: TimeGrid, opts: KatoOptions) -> Result<SolutionTrajectory> {
    u0.assert_divergence_free()?;
    if !time.steps.is_multiple_of(2) {
        return Err(Error::TimeGridMismatch(format!("{} steps (must be even)", time.steps)));
    }
    let grid = &u0.grid;
    let h = time.dt();
    let e = heat_factors(grid, h, opts.nu);
    let damp = |v: &[Complex64]| -> Vec<Complex64> { v.iter().zip(&e).map(|(z, f)| z * f).collect() };
    let c_of = |u: &SpectralVectorField| {
        if opts.nonlinear {
            nonlinear_term(u, u, opts.form)
        } else {
            SpectralVectorField::zeros(grid)
        }
    };
    let herm = u0.is_hermitian();
    let mut fields = vec![u0.clone()];
    let mut integral = SpectralVectorField::zeros(grid);
    let mut c_prev = c_of(u0);
    for m in 1..time.samples() {
        let t = time.time(m);
        let lin = heat_factors(grid, t, opts.nu);
        // part of I_m known before the step
        let known: [Vec<Complex64>; 3] =
            [0, 1, 2].map(|d| axpy(&damp(&integral.comps[d]), 0.5 * h, &damp(&c_prev.comps[d])));
        let build = |c: &SpectralVectorField| -> (SpectralVectorField, SpectralVectorField) {
            let i_m: [Vec<Complex64>; 3] = [0, 1, 2].map(|d| axpy(&known[d], 0.5 * h, &c.comps[d]));
            let u: [Vec<Complex64>; 3] =
                [0, 1, 2].map(|d| u0.comps[d].iter().zip(&lin).zip(&i_m[d]).map(|((z, f), s)| z * f - s).collect());
            let mk = |a| SpectralVectorField::new(grid, a).expect("sizes match").with_flags(herm, true);
            (mk(u), mk(i_m))
        };
        let guess =
            SpectralVectorField::new(grid, [0, 1, 2].map(|d| damp(&fields[m - 1].comps[d])))?.with_flags(herm, true);
        let mut u = guess;
        let mut c = c_of(&u);
        let mut converged = !opts.nonlinear;
        let mut last_inc = 0.0;
        let mut i_m = SpectralVectorField::zeros(grid);
        for _ in 0..opts.inner_max.max(1) {
            let (u_new, i_new) = build(&c);
            last_inc = u_new.sub(&u)?.max_modulus();
            let scale = u_new.max_modulus();
            u = u_new;
            i_m = i_new;
            if !opts.nonlinear {
                break;
            }
            c = c_of(&u);
            if last_inc <= opts.inner_tol * scale || scale == 0.0 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::InnerIterationDiverged { step: m, increment: last_inc });
        }
        if !opts.nonlinear {
            c = SpectralVectorField::zeros(grid);
        }
        integral = i_m;
        c_prev = c;
        fields.push(u);
    }
    Ok(SolutionTrajectory { grid: grid.clone(), time, fields })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub dt: f64,
    /// Interior sample times.
    pub times: Vec<f64>,
    /// `(E(t+h) - E(t-h))/(2h) + 2 nu Z(t)` with `E = ||u||_2^2`, `Z = ||grad u||_2^2`.
    pub residual: Vec<f64>,
    pub max_abs: f64,
    /// `max_abs / dt^2`.
    pub budget_constant: f64,
}

/// Centered-difference check of `d/dt ||u||^2 + 2 nu ||grad u||^2 = 0`.
pub fn energy_report(traj: &SolutionTrajectory, nu: f64) -> Result<EnergyReport> {
    let samples = traj.fields.len();
    if samples < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: samples });
    }
    let h = traj.time.dt();
    let ez: Vec<(f64, f64)> = traj.fields.iter().map(energy_enstrophy).collect();
    let times: Vec<f64> = (1..samples - 1).map(|m| traj.time.time(m)).collect();
    let residual: Vec<f64> =
        (1..samples - 1).map(|m| (ez[m + 1].0 - ez[m - 1].0) / (2.0 * h) + 2.0 * nu * ez[m].1).collect();
    let max_abs = residual.iter().map(|r| r.abs()).fold(0.0, f64::max);
    Ok(EnergyReport { dt: h, times, residual, max_abs, budget_constant: max_abs / (h * h) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FrequencyGrid;
    use crate::random::FieldRng;
    use std::f64::consts::PI;

    #[test]
    fn zero_data() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let t = kato_solve(&SpectralVectorField::zeros(&grid), TimeGrid::new_even(1.0, 4).unwrap(), Default::default())
            .unwrap();
        assert_eq!(t.sup_modulus(), 0.0);
        assert_eq!(energy_report(&t, 1.0).unwrap().max_abs, 0.0);
    }

    #[test]
    fn heat_residual_second_order() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let u0 = FieldRng::new(2).divergence_free_field(&grid, 2, 1.0);
        let opts = KatoOptions { nonlinear: false, ..Default::default() };
        let r = |m| {
            let tr = kato_solve(&u0, TimeGrid::new_even(0.5, m).unwrap(), opts).unwrap();
            energy_report(&tr, 1.0).unwrap().max_abs
        };
        let ratio = r(32) / r(64);
        assert!((ratio - 4.0).abs() < 0.6, "{ratio}");
    }
}
