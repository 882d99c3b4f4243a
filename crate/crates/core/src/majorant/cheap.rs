use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{ClampStats, MajorantField};
use crate::grid::FrequencyGrid;
use crate::norms::{leilin, lejan, sobolev_half};
use crate::quadrature::b0_prefactor;
use crate::spectral::{convolve_majorants, heat_factors};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CheapParams {
    pub t_end: f64,
    pub steps: usize,
    pub nu: f64,
    /// Blow-up is declared once `sup W > blowup_factor * sup W0`.
    pub blowup_factor: f64,
    /// Keep a full spectrum every `store_every` steps (0 keeps none).
    pub store_every: usize,
}

impl CheapParams {
    pub fn new(t_end: f64, steps: usize) -> Self {
        Self { t_end, steps, nu: 1.0, blowup_factor: 1e6, store_every: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0) || self.steps == 0 || !(self.nu > 0.0) || !(self.blowup_factor > 1.0) {
            return Err(Error::InvalidParameter(format!("{self:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CheapSample {
    pub t: f64,
    pub sup_spectrum: f64,
    pub lejan: f64,
    pub sobolev_half: f64,
    pub leilin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupReport {
    pub blown_up: bool,
    /// First sample time past the blow-up threshold.
    pub t_blow: Option<f64>,
    /// `(t, sup W(t))` per step.
    pub growth: Vec<(f64, f64)>,
}

impl BlowupReport {
    /// Index after which `sup W` never increases again.
    pub fn decay_onset(&self) -> usize {
        let g = &self.growth;
        (1..g.len()).rev().find(|&i| g[i].1 > g[i - 1].1).unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct CheapRun {
    pub series: Vec<CheapSample>,
    pub snapshots: Vec<(f64, MajorantField)>,
    pub report: BlowupReport,
    pub clamp: ClampStats,
}

/// `A exp(-|xi|^2 / (2 width^2))` with the zero mode removed (it is inert:
/// the quadratic term carries a factor `|xi|`).
pub fn gaussian_spectrum(grid: &FrequencyGrid, amplitude: f64, width: f64) -> MajorantField {
    let values = (0..grid.len())
        .map(|i| if i == 0 { 0.0 } else { amplitude * (-grid.norm_sq()[i] / (2.0 * width * width)).exp() })
        .collect();
    MajorantField { grid: grid.clone(), values }
}

fn nonlinear(w: &MajorantField) -> Result<(Vec<f64>, ClampStats)> {
    let (c, stats) = convolve_majorants(w, w)?;
    let pref = b0_prefactor();
    Ok((c.values.iter().enumerate().map(|(i, v)| pref * w.grid.xi_norm(i) * v).collect(), stats))
}

fn sample(t: f64, w: &MajorantField) -> CheapSample {
    CheapSample {
        t,
        sup_spectrum: w.max(),
        lejan: lejan(&w.grid, &w.values),
        sobolev_half: sobolev_half(&w.grid, &w.values),
        leilin: leilin(&w.grid, &w.values),
    }
}

/// `d/dt W = -nu |xi|^2 W + (18/(2 pi)^3)|xi| (W * W)`, the Fourier form of
/// `w_t = nu Delta w + 18 sqrt(-Delta)(w^2)`, by an exponential trapezoid
/// predictor-corrector. Every stage is a nonnegative combination, so the
/// spectrum stays nonnegative.
pub fn cheap_evolve(w0: &MajorantField, params: CheapParams) -> Result<CheapRun> {
    params.validate()?;
    let grid = &w0.grid;
    let h = params.t_end / params.steps as f64;
    let e = heat_factors(grid, h, params.nu);
    let phi: Vec<f64> = grid
        .norm_sq()
        .iter()
        .zip(&e)
        .map(|(k2, ei)| if *k2 == 0.0 { h } else { (1.0 - ei) / (params.nu * k2) })
        .collect();
    let s0 = w0.max();
    let mut w = w0.clone();
    let mut clamp = ClampStats::default();
    let mut series = vec![sample(0.0, &w)];
    let mut growth = vec![(0.0, s0)];
    let mut snapshots = if params.store_every > 0 { vec![(0.0, w.clone())] } else { Vec::new() };
    let mut t_blow = None;
    for step in 1..=params.steps {
        let t = if step == params.steps { params.t_end } else { h * step as f64 };
        let (nw, s1) = nonlinear(&w)?;
        let pred: Vec<f64> = (0..grid.len()).map(|i| e[i] * w.values[i] + phi[i] * nw[i]).collect();
        let pred = MajorantField { grid: grid.clone(), values: pred };
        let (np, s2) = nonlinear(&pred)?;
        clamp.merge(s1);
        clamp.merge(s2);
        let values: Vec<f64> = (0..grid.len()).map(|i| e[i] * w.values[i] + 0.5 * h * (e[i] * nw[i] + np[i])).collect();
        w = MajorantField { grid: grid.clone(), values };
        let s = w.max();
        growth.push((t, s));
        series.push(sample(t, &w));
        if params.store_every > 0 && step % params.store_every == 0 {
            snapshots.push((t, w.clone()));
        }
        if s0 > 0.0 && !(s <= params.blowup_factor * s0) {
            t_blow = Some(t);
            break;
        }
    }
    let report = BlowupReport { blown_up: t_blow.is_some(), t_blow, growth };
    Ok(CheapRun { series, snapshots, report, clamp })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BisectionResult {
    /// Largest amplitude seen without blow-up.
    pub below: f64,
    /// Smallest amplitude seen with blow-up.
    pub above: f64,
    /// `(amplitude, blown_up, t_blow)` per evaluation.
    pub evaluations: Vec<(f64, bool, Option<f64>)>,
}

/// Geometric bisection for the blow-up amplitude of `amplitude -> profile(amplitude)`
/// until `above / below <= ratio`.
pub fn bisect_blowup_amplitude(
    profile: impl Fn(f64) -> MajorantField,
    params: CheapParams,
    lo: f64,
    hi: f64,
    ratio: f64,
) -> Result<BisectionResult> {
    let mut evaluations = Vec::new();
    let mut probe = |a: f64| -> Result<bool> {
        let run = cheap_evolve(&profile(a), params)?;
        evaluations.push((a, run.report.blown_up, run.report.t_blow));
        Ok(run.report.blown_up)
    };
    if probe(lo)? {
        return Err(Error::PreconditionNotMet(format!("amplitude {lo} already blows up")));
    }
    if !probe(hi)? {
        return Err(Error::PreconditionNotMet(format!("amplitude {hi} does not blow up")));
    }
    let (mut below, mut above) = (lo, hi);
    while above / below > ratio {
        let mid = (below * above).sqrt();
        if probe(mid)? {
            above = mid;
        } else {
            below = mid;
        }
    }
    Ok(BisectionResult { below, above, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_stays_zero() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let run = cheap_evolve(&MajorantField::zeros(&grid), CheapParams::new(1.0, 10)).unwrap();
        assert!(run.series.iter().all(|s| s.sup_spectrum == 0.0));
        assert!(!run.report.blown_up);
    }

    #[test]
    fn small_gaussian_decays() {
        let grid = FrequencyGrid::new(16, 2.0 * PI).unwrap();
        let run = cheap_evolve(&gaussian_spectrum(&grid, 1e-3, 1.0), CheapParams::new(2.0, 100)).unwrap();
        assert!(!run.report.blown_up);
        assert_eq!(run.report.decay_onset(), 0);
    }

    #[test]
    fn large_gaussian_blows_up() {
        let grid = FrequencyGrid::new(16, 2.0 * PI).unwrap();
        let run = cheap_evolve(&gaussian_spectrum(&grid, 1e3, 1.0), CheapParams::new(1.0, 100)).unwrap();
        assert!(run.report.blown_up, "{:?}", run.report.growth.last());
    }
}
