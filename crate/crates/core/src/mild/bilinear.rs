use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{SolutionTrajectory, ZERO};
use crate::error::Result;
use crate::field::{zero_nyquist, SpectralVectorField};
use crate::grid::FrequencyGrid;
use crate::majorant::duhamel_trapezoid;
use crate::spectral::{leray_project, padded_physical, product_to_convolution, two_pi_cubed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BilinearForm {
    /// The Fourier-variable kernel applied to lattice convolutions.
    FourierKernel,
    /// Physical products, spectral divergence, then Leray projection.
    PhysicalDuhamel,
}

/// `conv(U_a, V_j)` for all `a, j`.
fn pair_convolutions(u: &SpectralVectorField, v: &SpectralVectorField) -> Vec<Vec<Vec<Complex64>>> {
    let grid = &u.grid;
    let pu: Vec<Vec<Complex64>> = u.comps.iter().map(|c| padded_physical(grid, c)).collect();
    let pv: Vec<Vec<Complex64>> =
        if std::ptr::eq(u, v) { pu.clone() } else { v.comps.iter().map(|c| padded_physical(grid, c)).collect() };
    (0..3)
        .map(|a| {
            (0..3)
                .map(|j| {
                    let prod = pu[a].iter().zip(&pv[j]).map(|(x, y)| x * y).collect();
                    product_to_convolution(grid, prod)
                })
                .collect()
        })
        .collect()
}

/// `sum_{j,k} (i xi_j xi_k / ((2 pi)^3 |xi|^2)) (xi_k U_l - xi_l U_k)(eta) V_j(xi - eta)`,
/// integrated in `eta`.
fn fourier_kernel(grid: &FrequencyGrid, c: &[Vec<Vec<Complex64>>]) -> [Vec<Complex64>; 3] {
    let inv = 1.0 / two_pi_cubed();
    let mut out = [vec![ZERO; grid.len()], vec![ZERO; grid.len()], vec![ZERO; grid.len()]];
    for i in 0..grid.len() {
        let k2 = grid.norm_sq()[i];
        if k2 == 0.0 {
            continue;
        }
        let xi = grid.xi(i);
        for l in 0..3 {
            let mut acc = ZERO;
            for j in 0..3 {
                for k in 0..3 {
                    let w = xi[j] * xi[k] / k2;
                    acc += (c[l][j][i] * xi[k] - c[k][j][i] * xi[l]) * w;
                }
            }
            out[l][i] = Complex64::new(0.0, inv) * acc;
        }
    }
    out
}

/// `F(P div(u (x) v))` with `(div(u (x) v))_l = sum_j d_j(u_l v_j)`.
fn physical_duhamel(grid: &FrequencyGrid, c: &[Vec<Vec<Complex64>>]) -> [Vec<Complex64>; 3] {
    let inv = 1.0 / two_pi_cubed();
    let comps = [0, 1, 2].map(|l| {
        (0..grid.len())
            .map(|i| {
                let xi = grid.xi(i);
                (0..3).map(|j| c[l][j][i] * xi[j]).sum::<Complex64>() * Complex64::new(0.0, inv)
            })
            .collect::<Vec<_>>()
    });
    let raw = SpectralVectorField::new(grid, comps).expect("sizes match");
    leray_project(&raw).comps
}

/// The integrand `P div(u (x) v)` in Fourier variables at one time.
pub fn nonlinear_term(u: &SpectralVectorField, v: &SpectralVectorField, form: BilinearForm) -> SpectralVectorField {
    let grid = &u.grid;
    let c = pair_convolutions(u, v);
    let mut comps = match form {
        BilinearForm::FourierKernel => fourier_kernel(grid, &c),
        BilinearForm::PhysicalDuhamel => physical_duhamel(grid, &c),
    };
    for comp in comps.iter_mut() {
        comp[0] = ZERO;
        zero_nyquist(grid, comp);
    }
    let herm = u.is_hermitian() && v.is_hermitian();
    SpectralVectorField::new(grid, comps).expect("sizes match").with_flags(herm, true)
}

/// `B(U, V)(t) = int_0^t e^{nu (t-s) Delta} P div(u (x) v)(s) ds`, trapezoid in `s`
/// with exact heat factors.
pub fn nse_bilinear_b(
    u: &SolutionTrajectory,
    v: &SolutionTrajectory,
    form: BilinearForm,
    nu: f64,
) -> Result<SolutionTrajectory> {
    u.check_compatible(v)?;
    for f in u.fields.iter().chain(&v.fields) {
        f.assert_divergence_free()?;
    }
    let grid = &u.grid;
    let terms: Vec<SpectralVectorField> = u
        .fields
        .par_iter()
        .zip(&v.fields)
        .map(|(a, b)| if std::ptr::eq(a, b) { nonlinear_term(a, a, form) } else { nonlinear_term(a, b, form) })
        .collect();
    let herm = terms.iter().all(|t| t.is_hermitian());
    let per_comp: Vec<Vec<Vec<Complex64>>> = (0..3)
        .map(|d| {
            let c: Vec<Vec<Complex64>> = terms.iter().map(|t| t.comps[d].clone()).collect();
            duhamel_trapezoid(grid, u.time, nu, &c)
        })
        .collect();
    let fields = (0..u.time.samples())
        .map(|m| {
            let comps = [0, 1, 2].map(|d| per_comp[d][m].clone());
            SpectralVectorField::new(grid, comps).expect("sizes match").with_flags(herm, true)
        })
        .collect();
    Ok(SolutionTrajectory { grid: grid.clone(), time: u.time, fields })
}
