use serde::Serialize;

use super::{dominance_excess, nse_bilinear_b, BilinearForm, SolutionTrajectory};
use crate::error::{Error, Result};
use crate::field::{ClampStats, MajorantField, SpectralVectorField};
use crate::grid::TimeGrid;
use crate::majorant::{majorant_step, MajorantTrajectory, DIVERGENCE_FACTOR};

/// Relative tolerance of the dominance audit.
pub const DOMINANCE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoupledOptions {
    pub n_max: usize,
    pub tol: f64,
    pub nu: f64,
    pub form: BilinearForm,
}

impl Default for CoupledOptions {
    fn default() -> Self {
        Self { n_max: 40, tol: 1e-12, nu: 1.0, form: BilinearForm::FourierKernel }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PicardStatus {
    Converged,
    Divergent,
    MaxIterations,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceReport {
    /// `max_{t,xi} (|U^[n]| - W^[n])` for `n = 0, 1, ...`
    pub value_excess: Vec<f64>,
    /// `max_{t,xi} (|U^[n+1] - U^[n]| - (W^[n+1] - W^[n]))`
    pub increment_excess: Vec<f64>,
    pub scale: f64,
    pub pass: bool,
}

impl DominanceReport {
    fn finish(mut self) -> Self {
        let lim = DOMINANCE_TOL * self.scale;
        self.pass = self.value_excess.iter().chain(&self.increment_excess).all(|e| *e <= lim);
        self
    }
}

#[derive(Clone, Debug)]
pub struct CoupledResult {
    pub solution: SolutionTrajectory,
    pub majorant: MajorantTrajectory,
    pub dominance: DominanceReport,
    pub status: PicardStatus,
    /// `(sup |U^[n+1] - U^[n]|, sup (W^[n+1] - W^[n]))` per iteration.
    pub increments: Vec<(f64, f64)>,
    pub clamp: ClampStats,
}

/// `U^[n+1] = e^{t Delta}U0 - B(U^[n], U^[n])` run jointly with
/// `W^[n+1] = e^{t Delta}W0 + B0(W^[n], W^[n])`, auditing dominance at each step.
pub fn coupled_picard(
    u0: &SpectralVectorField,
    w0: &MajorantField,
    time: TimeGrid,
    opts: CoupledOptions,
) -> Result<CoupledResult> {
    u0.grid.check_same(&w0.grid)?;
    u0.assert_hermitian()?;
    u0.assert_divergence_free()?;
    let excess = (0..u0.grid.len()).map(|i| u0.modulus_at(i) - w0.values[i]).fold(0.0, f64::max);
    if excess > 1e-12 * w0.max() {
        return Err(Error::InitialDominationViolated(excess));
    }
    if opts.n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let u_base = SolutionTrajectory::heat(u0, time, opts.nu)?;
    let w_base = MajorantTrajectory::heat(w0, time, opts.nu);
    MajorantTrajectory::new(time, w_base.values.clone())?;
    let limit = DIVERGENCE_FACTOR * w0.max();
    let (mut u, mut w) = (u_base.clone(), w_base.clone());
    let mut report = DominanceReport {
        value_excess: vec![dominance_excess(&u, &w)],
        increment_excess: vec![],
        scale: 0.0,
        pass: false,
    };
    let mut increments = Vec::new();
    let mut clamp = ClampStats::default();
    let mut status = PicardStatus::MaxIterations;
    for n in 0..opts.n_max {
        let b = nse_bilinear_b(&u, &u, opts.form, opts.nu)?;
        let u_next = u_base.sub(&b)?;
        let (w_next, w_inc, stats) = majorant_step(&w_base, &w, opts.nu, n + 1)?;
        clamp.merge(stats);
        let du = u_next.sub(&u)?;
        let dw: Vec<MajorantField> = w_next
            .values
            .iter()
            .zip(&w.values)
            .map(|(a, b)| MajorantField {
                grid: a.grid.clone(),
                values: a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect(),
            })
            .collect();
        let dw = MajorantTrajectory { grid: w.grid.clone(), time, values: dw };
        report.increment_excess.push(dominance_excess(&du, &dw));
        report.value_excess.push(dominance_excess(&u_next, &w_next));
        let u_inc = du.sup_modulus();
        increments.push((u_inc, w_inc));
        u = u_next;
        w = w_next;
        let w_sup = w.sup();
        if !(w_sup <= limit) {
            status = PicardStatus::Divergent;
            break;
        }
        if u_inc <= opts.tol * u.sup_modulus().max(f64::MIN_POSITIVE) && w_inc <= opts.tol * w_sup {
            status = PicardStatus::Converged;
            break;
        }
        if w_sup == 0.0 {
            status = PicardStatus::Converged;
            break;
        }
    }
    report.scale = w.sup();
    Ok(CoupledResult { solution: u, majorant: w, dominance: report.finish(), status, increments, clamp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FrequencyGrid;
    use std::f64::consts::PI;

    #[test]
    fn zero_data() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let r = coupled_picard(
            &SpectralVectorField::zeros(&grid),
            &MajorantField::zeros(&grid),
            TimeGrid::new_even(1.0, 8).unwrap(),
            CoupledOptions::default(),
        )
        .unwrap();
        assert_eq!(r.status, PicardStatus::Converged);
        assert_eq!(r.solution.sup_modulus(), 0.0);
        assert!(r.dominance.pass);
    }

    #[test]
    fn domination_precondition() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let u0 = crate::random::FieldRng::new(3).divergence_free_field(&grid, 2, 1.0);
        let err =
            coupled_picard(&u0, &MajorantField::zeros(&grid), TimeGrid::new_even(1.0, 4).unwrap(), Default::default());
        assert!(matches!(err, Err(Error::InitialDominationViolated(_))));
    }
}
