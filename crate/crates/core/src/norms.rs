//! Critical-space norms of Fourier-side data and thermic seminorms.
//!
//! Fourier-side norms act on the modulus `W(xi) = |U(xi)|` with `d xi` realized
//! as `dxi^3` times the lattice sum; the zero mode is excluded from every
//! weighted norm (it has measure zero in the continuum).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{lp_norm, to_physical, MajorantField, SpectralScalar, SpectralVectorField};
use crate::grid::FrequencyGrid;

/// Dyadic Herz index `B^s_{p,q}`; `p`, `q` may be `f64::INFINITY`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HerzIndex {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl HerzIndex {
    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        check_exponent(p)?;
        check_exponent(q)?;
        Ok(Self { s, p, q })
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange(p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HerzValue {
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub value: f64,
}

/// Log-spaced time sampling for the thermic seminorms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermicParams {
    pub t_min: f64,
    pub t_max: f64,
    pub per_decade: usize,
    /// Regularity index for `sup_t t^{beta/2} ||e^{t Delta} f||_inf`.
    pub beta: f64,
    pub nu: f64,
}

impl ThermicParams {
    pub fn new(t_max: f64) -> Self {
        Self { t_min: 1e-6 * t_max, t_max, per_decade: 32, beta: 1.0, nu: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0) || !(self.t_min > 0.0) || self.t_min >= self.t_max {
            return Err(Error::InvalidParameter(format!("thermic range [{}, {}]", self.t_min, self.t_max)));
        }
        if self.per_decade < 32 {
            return Err(Error::InvalidParameter(format!("{} samples per decade (need >= 32)", self.per_decade)));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        log_grid(self.t_min, self.t_max, self.per_decade)
    }
}

/// Log grid from `lo` to `hi` inclusive with `per_decade` points per decade.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let count = (decades * per_decade as f64).ceil().max(1.0) as usize;
    (0..=count).map(|i| lo * (hi / lo).powf(i as f64 / count as f64)).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct NormParams {
    pub herz: Vec<HerzIndex>,
    pub thermic: Option<ThermicParams>,
}

/// A thermic supremum together with where it was attained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermicValue {
    pub value: f64,
    pub t_argmax: f64,
    /// Values at the first and last sample, to expose truncation of the sup.
    pub at_t_min: f64,
    pub at_t_max: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct NormReport {
    /// `(int |xi| W^2 d xi)^{1/2}` (`L^2(|xi| d xi)`).
    pub sobolev_half: Option<f64>,
    /// `sup |xi|^2 W`.
    pub lejan: Option<f64>,
    /// `int W d xi / |xi|`.
    pub leilin: Option<f64>,
    pub herz: Vec<HerzValue>,
    /// `||u||_2` by Plancherel.
    pub energy_l2: Option<f64>,
    /// `sup_{0<t<T} t^{1/4} ||e^{t Delta} u||_6`.
    pub thermic_kato: Option<ThermicValue>,
    /// `sup_t t^{beta/2} ||e^{t Delta} u||_inf`.
    pub besov_minus: Option<ThermicValue>,
}

/// Input accepted by [`norms`].
pub enum NormInput<'a> {
    Scalar(&'a SpectralScalar),
    Vector(&'a SpectralVectorField),
    /// A majorant read as the spectrum of a real function `w`.
    Majorant(&'a MajorantField),
}

impl NormInput<'_> {
    fn grid(&self) -> &FrequencyGrid {
        match self {
            NormInput::Scalar(s) => &s.grid,
            NormInput::Vector(v) => &v.grid,
            NormInput::Majorant(m) => &m.grid,
        }
    }

    fn modulus(&self) -> Vec<f64> {
        match self {
            NormInput::Scalar(s) => s.coeffs.iter().map(|c| c.norm()).collect(),
            NormInput::Vector(v) => v.modulus().values,
            NormInput::Majorant(m) => m.values.clone(),
        }
    }

    fn components(&self) -> Vec<Vec<Complex64>> {
        match self {
            NormInput::Scalar(s) => vec![s.coeffs.clone()],
            NormInput::Vector(v) => v.comps.to_vec(),
            NormInput::Majorant(m) => vec![m.as_spectral().coeffs],
        }
    }
}

pub fn sobolev_half(grid: &FrequencyGrid, w: &[f64]) -> f64 {
    let s: f64 = w.iter().enumerate().map(|(i, v)| grid.xi_norm(i) * v * v).sum();
    (s * grid.dxi3()).sqrt()
}

pub fn lejan(grid: &FrequencyGrid, w: &[f64]) -> f64 {
    w.iter().enumerate().map(|(i, v)| grid.norm_sq()[i] * v).fold(0.0, f64::max)
}

pub fn leilin(grid: &FrequencyGrid, w: &[f64]) -> f64 {
    let s: f64 = w.iter().enumerate().skip(1).map(|(i, v)| v / grid.xi_norm(i)).sum();
    s * grid.dxi3()
}

/// Dyadic shell index `j` with `2^j <= |xi| < 2^{j+1}`; `None` at the origin.
pub fn shell_index(r: f64) -> Option<i32> {
    if r > 0.0 {
        Some(r.log2().floor() as i32)
    } else {
        None
    }
}

/// Per-shell data used by the Herz norms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Shell {
    pub j: i32,
    /// `||1_shell W||_p` for the requested `p`.
    pub lp: f64,
    /// `int_shell W^2 d xi`.
    pub l2_sq: f64,
    /// `int_shell |xi| W^2 d xi`.
    pub weighted_sq: f64,
}

pub fn herz_shells(grid: &FrequencyGrid, w: &[f64], p: f64) -> Result<Vec<Shell>> {
    check_exponent(p)?;
    let mut groups: std::collections::BTreeMap<i32, Vec<usize>> = Default::default();
    for i in 0..grid.len() {
        if let Some(j) = shell_index(grid.xi_norm(i)) {
            groups.entry(j).or_default().push(i);
        }
    }
    Ok(groups
        .into_iter()
        .map(|(j, idx)| {
            let vals: Vec<f64> = idx.iter().map(|&i| w[i]).collect();
            let l2_sq = vals.iter().map(|v| v * v).sum::<f64>() * grid.dxi3();
            let weighted_sq = idx.iter().map(|&i| grid.xi_norm(i) * w[i] * w[i]).sum::<f64>() * grid.dxi3();
            Shell { j, lp: lp_norm(&vals, grid.dxi3(), p), l2_sq, weighted_sq }
        })
        .collect())
}

pub fn herz(grid: &FrequencyGrid, w: &[f64], idx: HerzIndex) -> Result<f64> {
    check_exponent(idx.q)?;
    let terms: Vec<f64> = herz_shells(grid, w, idx.p)?.iter().map(|s| 2f64.powf(s.j as f64 * idx.s) * s.lp).collect();
    Ok(lp_norm(&terms, 1.0, idx.q))
}

fn thermic_sup(
    grid: &FrequencyGrid,
    comps: &[Vec<Complex64>],
    params: &ThermicParams,
    weight: impl Fn(f64) -> f64,
    norm: impl Fn(&[f64]) -> f64,
) -> ThermicValue {
    let times = params.times();
    let vals: Vec<f64> = times
        .iter()
        .map(|&t| {
            let h: Vec<f64> = grid.norm_sq().iter().map(|k2| (-params.nu * t * k2).exp()).collect();
            let mut mod_sq = vec![0.0; grid.len()];
            for c in comps {
                let damped: Vec<Complex64> = c.iter().zip(&h).map(|(z, e)| z * e).collect();
                let p = to_physical(grid, &damped);
                mod_sq.iter_mut().zip(&p.values).for_each(|(m, z)| *m += z.norm_sqr());
            }
            let abs: Vec<f64> = mod_sq.into_iter().map(f64::sqrt).collect();
            weight(t) * norm(&abs)
        })
        .collect();
    let (arg, value) = vals.iter().enumerate().fold((0, 0.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    ThermicValue { value, t_argmax: times[arg], at_t_min: vals[0], at_t_max: *vals.last().unwrap() }
}

/// `sup_t t^{1/4} ||e^{nu t Delta} u||_6` over the log grid.
pub fn thermic_kato(grid: &FrequencyGrid, comps: &[Vec<Complex64>], params: &ThermicParams) -> ThermicValue {
    let dx3 = grid.dx3();
    thermic_sup(grid, comps, params, |t| t.powf(0.25), |a| lp_norm(a, dx3, 6.0))
}

/// `sup_t t^{beta/2} ||e^{nu t Delta} u||_inf` over the log grid.
pub fn besov_minus(grid: &FrequencyGrid, comps: &[Vec<Complex64>], params: &ThermicParams) -> ThermicValue {
    let b = params.beta;
    thermic_sup(grid, comps, params, |t| t.powf(b / 2.0), |a| lp_norm(a, 1.0, f64::INFINITY))
}

pub fn norms(input: NormInput<'_>, params: &NormParams) -> Result<NormReport> {
    let grid = input.grid().clone();
    let w = input.modulus();
    let herz = params
        .herz
        .iter()
        .map(|h| Ok(HerzValue { s: h.s, p: h.p, q: h.q, value: herz(&grid, &w, *h)? }))
        .collect::<Result<Vec<_>>>()?;
    let energy = (w.iter().map(|v| v * v).sum::<f64>() / grid.length().powi(3)).sqrt();
    let (kato, besov) = match &params.thermic {
        Some(tp) => {
            tp.validate()?;
            let comps = input.components();
            (Some(thermic_kato(&grid, &comps, tp)), Some(besov_minus(&grid, &comps, tp)))
        }
        None => (None, None),
    };
    Ok(NormReport {
        sobolev_half: Some(sobolev_half(&grid, &w)),
        lejan: Some(lejan(&grid, &w)),
        leilin: Some(leilin(&grid, &w)),
        herz,
        energy_l2: Some(energy),
        thermic_kato: kato,
        besov_minus: besov,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_shell_herz_value() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        // shell j = 0 holds 1 <= |xi| < 2
        let w: Vec<f64> =
            (0..grid.len()).map(|i| if shell_index(grid.xi_norm(i)) == Some(0) { 1.0 } else { 0.0 }).collect();
        let count = w.iter().filter(|v| **v > 0.0).count() as f64;
        let h = herz(&grid, &w, HerzIndex::new(0.5, 2.0, 2.0).unwrap()).unwrap();
        assert!((h - (count * grid.dxi3()).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn lejan_of_inverse_square_is_one() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let w: Vec<f64> = grid.norm_sq().iter().map(|k2| if *k2 > 0.0 { 1.0 / k2 } else { 0.0 }).collect();
        assert!((lejan(&grid, &w) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exponent_bounds() {
        assert_eq!(HerzIndex::new(0.0, 0.5, 1.0).unwrap_err(), Error::ExponentOutOfRange(0.5));
        assert!(HerzIndex::new(0.0, 1.0, f64::INFINITY).is_ok());
    }

    #[test]
    fn empty_shells_contribute_nothing() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let w = vec![0.0; grid.len()];
        assert_eq!(herz(&grid, &w, HerzIndex::new(-1.0, 1.0, 1.0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn log_grid_density() {
        let g = log_grid(1e-6, 1e3, 64);
        assert_eq!(g.len(), 9 * 64 + 1);
        assert!((g[0] - 1e-6).abs() < 1e-20 && (g[g.len() - 1] - 1e3).abs() < 1e-9);
    }
}
