use serde::Serialize;

use super::{cheap_bilinear_b0, MajorantTrajectory};
use crate::error::{Error, Result};
use crate::field::{ClampStats, MajorantField};
use crate::grid::TimeGrid;

/// Sup-norm growth factor (relative to `sup W0`) that flags divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e6;
/// Relative slack for the monotonicity check.
pub const MONOTONE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PicardOptions {
    pub n_max: usize,
    pub tol: f64,
    pub nu: f64,
    /// Keep every iterate (needed for dominance audits).
    pub keep_iterates: bool,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self { n_max: 30, tol: 1e-12, nu: 1.0, keep_iterates: false }
    }
}

#[derive(Clone, Debug)]
pub struct PicardResult {
    pub trajectory: MajorantTrajectory,
    /// `W^[0], W^[1], ...` when requested, otherwise empty.
    pub iterates: Vec<MajorantTrajectory>,
    pub converged: bool,
    pub diverged: bool,
    /// `sup (W^[n+1] - W^[n])` per iteration.
    pub sup_increments: Vec<f64>,
    pub clamp: ClampStats,
}

impl PicardResult {
    pub fn iterations(&self) -> usize {
        self.sup_increments.len()
    }
}

/// One step `W^[n+1] = base + B0(W^[n], W^[n])` with the monotonicity check.
/// Defects below the tolerance are round-off and are lifted to `W^[n]`, so the
/// iterates are monotone exactly. Returns the new iterate and `sup (W^[n+1] - W^[n])`.
pub(crate) fn majorant_step(
    base: &MajorantTrajectory,
    current: &MajorantTrajectory,
    nu: f64,
    iterate: usize,
) -> Result<(MajorantTrajectory, f64, ClampStats)> {
    let (b, stats) = cheap_bilinear_b0(current, current, nu)?;
    let mut next = base.add(&b)?;
    let defect = current.max_excess_over(&next);
    if defect > MONOTONE_TOL * next.sup() {
        return Err(Error::MonotonicityViolation { iterate, defect });
    }
    if defect > 0.0 {
        for (n, c) in next.values.iter_mut().zip(&current.values) {
            n.values.iter_mut().zip(&c.values).for_each(|(a, b)| *a = a.max(*b));
        }
    }
    let inc = next.max_excess_over(current);
    Ok((next, inc, stats))
}

/// `W^[0] = e^{t Delta} W0`, `W^[n+1] = W^[0] + B0(W^[n], W^[n])`.
pub fn majorant_picard(w0: &MajorantField, time: TimeGrid, opts: PicardOptions) -> Result<PicardResult> {
    if opts.n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let base = MajorantTrajectory::heat(w0, time, opts.nu);
    MajorantTrajectory::new(time, base.values.clone())?;
    let limit = DIVERGENCE_FACTOR * w0.max();
    let mut current = base.clone();
    let mut iterates = if opts.keep_iterates { vec![base.clone()] } else { Vec::new() };
    let mut sup_increments = Vec::new();
    let mut clamp = ClampStats::default();
    let mut converged = false;
    let mut diverged = false;
    for n in 0..opts.n_max {
        let (next, inc, stats) = majorant_step(&base, &current, opts.nu, n + 1)?;
        clamp.merge(stats);
        let scale = next.sup();
        sup_increments.push(inc);
        if opts.keep_iterates {
            iterates.push(next.clone());
        }
        current = next;
        if !(scale <= limit) {
            diverged = true;
            break;
        }
        if inc <= opts.tol * scale {
            converged = true;
            break;
        }
    }
    Ok(PicardResult { trajectory: current, iterates, converged, diverged, sup_increments, clamp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FrequencyGrid;
    use std::f64::consts::PI;

    #[test]
    fn zero_data_converges_at_once() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let r = majorant_picard(&MajorantField::zeros(&grid), TimeGrid::new_even(1.0, 8).unwrap(), Default::default())
            .unwrap();
        assert!(r.converged && r.iterations() == 1 && r.trajectory.sup() == 0.0);
    }

    #[test]
    fn inverse_square_small_data_converges() {
        let grid = FrequencyGrid::new(16, 2.0 * PI).unwrap();
        let w0 = MajorantField::from_fn(&grid, |xi| {
            let k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
            if k2 > 0.0 {
                0.01 / k2
            } else {
                0.0
            }
        })
        .unwrap();
        let opts = PicardOptions { n_max: 10, tol: 1e-10, ..Default::default() };
        let r = majorant_picard(&w0, TimeGrid::new_even(1.0, 64).unwrap(), opts).unwrap();
        assert!(r.converged && !r.diverged, "{:?}", r.sup_increments);
        assert_eq!(r.clamp.count, 0);
    }
}
