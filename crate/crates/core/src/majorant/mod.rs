//! Scalar majorant calculus: `B0`, the monotone Picard scheme, the cheap
//! equation and smallness certificates.

mod b0;
mod certificate;
mod cheap;
mod picard;

pub use b0::{cheap_bilinear_b0, duhamel_trapezoid};
pub use certificate::{global_certificate, local_certificate, Certificate, LocalSpace, Space};
pub use cheap::{
    bisect_blowup_amplitude, cheap_evolve, gaussian_spectrum, BisectionResult, BlowupReport, CheapParams, CheapRun,
    CheapSample,
};
pub(crate) use picard::majorant_step;
pub use picard::{majorant_picard, PicardOptions, PicardResult, DIVERGENCE_FACTOR};

use crate::error::{Error, Result};
use crate::field::MajorantField;
use crate::grid::{FrequencyGrid, TimeGrid};
use crate::spectral::heat_factors;

/// Majorant samples on a uniform time grid with an even number of steps.
#[derive(Clone, Debug, PartialEq)]
pub struct MajorantTrajectory {
    pub grid: FrequencyGrid,
    pub time: TimeGrid,
    pub values: Vec<MajorantField>,
}

impl MajorantTrajectory {
    pub fn new(time: TimeGrid, values: Vec<MajorantField>) -> Result<Self> {
        if !time.steps.is_multiple_of(2) {
            return Err(Error::TimeGridMismatch(format!("{} steps (must be even)", time.steps)));
        }
        if values.len() != time.samples() {
            return Err(Error::TimeGridMismatch(format!("{} samples for {} times", values.len(), time.samples())));
        }
        let grid = values[0].grid.clone();
        for v in &values {
            grid.check_same(&v.grid)?;
        }
        Ok(Self { grid, time, values })
    }

    pub fn zeros(grid: &FrequencyGrid, time: TimeGrid) -> Self {
        Self { grid: grid.clone(), values: vec![MajorantField::zeros(grid); time.samples()], time }
    }

    /// `e^{-nu t |xi|^2} W0` at every sample.
    pub fn heat(w0: &MajorantField, time: TimeGrid, nu: f64) -> Self {
        let values = time
            .times()
            .iter()
            .map(|&t| {
                let h = heat_factors(&w0.grid, t, nu);
                MajorantField { grid: w0.grid.clone(), values: w0.values.iter().zip(&h).map(|(w, e)| w * e).collect() }
            })
            .collect();
        Self { grid: w0.grid.clone(), time, values }
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().map(|v| v.max()).fold(0.0, f64::max)
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        if self.time != other.time {
            return Err(Error::TimeGridMismatch(format!("{:?} vs {:?}", self.time, other.time)));
        }
        Ok(())
    }

    /// `max (other - self)^-`, the largest amount by which `self` exceeds `other`.
    pub fn max_excess_over(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.values.iter().zip(&b.values).map(|(x, y)| x - y))
            .fold(0.0, f64::max)
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| MajorantField {
                grid: a.grid.clone(),
                values: a.values.iter().zip(&b.values).map(|(x, y)| x + y).collect(),
            })
            .collect();
        Ok(Self { grid: self.grid.clone(), time: self.time, values })
    }

    /// Sample at time `t` by linear interpolation between stored samples.
    pub fn at_time(&self, t: f64) -> MajorantField {
        let dt = self.time.dt();
        let x = (t / dt).clamp(0.0, self.time.steps as f64);
        let lo = (x.floor() as usize).min(self.time.steps);
        let hi = (lo + 1).min(self.time.steps);
        let f = x - lo as f64;
        if f == 0.0 || lo == hi {
            return self.values[lo].clone();
        }
        let (a, b) = (&self.values[lo].values, &self.values[hi].values);
        MajorantField { grid: self.grid.clone(), values: a.iter().zip(b).map(|(p, q)| (1.0 - f) * p + f * q).collect() }
    }
}
