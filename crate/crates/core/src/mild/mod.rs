//! The vector integral equation `U = e^{t Delta} U0 - B(U, U)` in Fourier
//! variables: bilinear operator in two forms, coupled Picard iteration with
//! majorant dominance, Gevrey check, and a time-marching solver.

mod bilinear;
mod gevrey;
mod kato;
mod picard;

pub use bilinear::{nonlinear_term, nse_bilinear_b, BilinearForm};
pub use gevrey::{gevrey_verify, sqrt_e_check, GevreyReport};
pub use kato::{energy_report, kato_solve, EnergyReport, KatoOptions};
pub use picard::{coupled_picard, CoupledOptions, CoupledResult, DominanceReport, PicardStatus, DOMINANCE_TOL};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{lp_norm, SpectralVectorField};
use crate::grid::{FrequencyGrid, TimeGrid};
use crate::majorant::MajorantTrajectory;
use crate::spectral::heat_semigroup_vector;

/// Spectral vector fields on a uniform time grid with an even number of steps.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionTrajectory {
    pub grid: FrequencyGrid,
    pub time: TimeGrid,
    pub fields: Vec<SpectralVectorField>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub t: f64,
    /// `||u||_2^2`
    pub energy: f64,
    /// `||grad (x) u||_2^2`
    pub enstrophy: f64,
    /// `t^{1/4} ||u(t)||_6`
    pub kato_seminorm: f64,
    pub gevrey_radius: Option<f64>,
}

impl SolutionTrajectory {
    /// Checked constructor: every field must be Hermitian and divergence-free.
    pub fn new(time: TimeGrid, fields: Vec<SpectralVectorField>) -> Result<Self> {
        if !time.steps.is_multiple_of(2) || fields.len() != time.samples() {
            return Err(Error::TimeGridMismatch(format!("{} fields, {} steps", fields.len(), time.steps)));
        }
        let grid = fields[0].grid.clone();
        for f in &fields {
            grid.check_same(&f.grid)?;
            f.assert_hermitian()?;
            f.assert_divergence_free()?;
        }
        Ok(Self { grid, time, fields })
    }

    pub fn zeros(grid: &FrequencyGrid, time: TimeGrid) -> Self {
        Self { grid: grid.clone(), time, fields: vec![SpectralVectorField::zeros(grid); time.samples()] }
    }

    pub fn heat(u0: &SpectralVectorField, time: TimeGrid, nu: f64) -> Result<Self> {
        let fields = time.times().iter().map(|&t| heat_semigroup_vector(u0, t, nu)).collect::<Result<_>>()?;
        Ok(Self { grid: u0.grid.clone(), time, fields })
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        if self.time != other.time {
            return Err(Error::TimeGridMismatch(format!("{:?} vs {:?}", self.time, other.time)));
        }
        Ok(())
    }

    /// Euclidean modulus per `(t, xi)`.
    pub fn modulus(&self) -> MajorantTrajectory {
        MajorantTrajectory {
            grid: self.grid.clone(),
            time: self.time,
            values: self.fields.iter().map(|f| f.modulus()).collect(),
        }
    }

    pub fn sup_modulus(&self) -> f64 {
        self.fields.iter().map(|f| f.max_modulus()).fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let fields = self.fields.iter().zip(&other.fields).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        Ok(Self { grid: self.grid.clone(), time: self.time, fields })
    }

    /// `max_{t, xi} |self - other|`.
    pub fn max_difference(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.sup_modulus())
    }

    pub fn diagnostics(&self) -> Vec<Diagnostics> {
        let scale = self.sup_modulus();
        self.time
            .times()
            .iter()
            .zip(&self.fields)
            .map(|(&t, f)| {
                let (energy, enstrophy) = energy_enstrophy(f);
                Diagnostics {
                    t,
                    energy,
                    enstrophy,
                    kato_seminorm: t.powf(0.25) * l6_norm(f),
                    gevrey_radius: gevrey_radius(f, scale),
                }
            })
            .collect()
    }
}

/// `(||u||_2^2, ||grad u||_2^2)` by Plancherel.
pub fn energy_enstrophy(f: &SpectralVectorField) -> (f64, f64) {
    let vol = f.grid.length().powi(3);
    let (mut e, mut z) = (0.0, 0.0);
    for i in 0..f.grid.len() {
        let m2 = f.modulus_at(i).powi(2);
        e += m2;
        z += f.grid.norm_sq()[i] * m2;
    }
    (e / vol, z / vol)
}

/// `||u||_6` on the physical grid.
pub fn l6_norm(f: &SpectralVectorField) -> f64 {
    let p = f.to_physical();
    let abs: Vec<f64> =
        (0..f.grid.len()).map(|j| p.iter().map(|c| c.values[j].re.powi(2)).sum::<f64>().sqrt()).collect();
    lp_norm(&abs, f.grid.dx3(), 6.0)
}

/// `-max_xi log|U(xi)| / |xi|` over modes with `|U| > 1e-12 * scale`.
pub fn gevrey_radius(f: &SpectralVectorField, scale: f64) -> Option<f64> {
    let floor = 1e-12 * scale;
    (1..f.grid.len())
        .filter_map(|i| {
            let m = f.modulus_at(i);
            (m > floor && m > 0.0).then(|| m.ln() / f.grid.xi_norm(i))
        })
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
        .map(|v| -v)
}

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `max (|U| - W)` over all samples.
pub fn dominance_excess(u: &SolutionTrajectory, w: &MajorantTrajectory) -> f64 {
    u.fields
        .iter()
        .zip(&w.values)
        .flat_map(|(f, m)| (0..f.grid.len()).map(move |i| f.modulus_at(i) - m.values[i]))
        .fold(f64::NEG_INFINITY, f64::max)
}
