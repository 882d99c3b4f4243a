use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::MajorantField;
use crate::grid::FrequencyGrid;
use crate::norms::{herz, leilin, lejan, sobolev_half, HerzIndex};
use crate::quadrature::{
    b0_prefactor, beta, kernel_sup_constant, ljs_constant, ljs_local_constant, DerivedConstant, Provenance,
};
use crate::spectral::convolve_majorants;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Space {
    FujitaKato,
    LeJanSznitman,
    LeiLin,
    Herz(HerzIndex),
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::FujitaKato => write!(f, "fujita_kato"),
            Space::LeJanSznitman => write!(f, "lejan_sznitman"),
            Space::LeiLin => write!(f, "lei_lin"),
            Space::Herz(h) => write!(f, "herz({},{},{})", h.s, h.p, h.q),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum LocalSpace {
    FujitaKatoLocal,
    LeJanSznitmanLocal,
}

impl fmt::Display for LocalSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalSpace::FujitaKatoLocal => write!(f, "fujita_kato_local"),
            LocalSpace::LeJanSznitmanLocal => write!(f, "lejan_sznitman_local"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub space: String,
    pub norm_value: f64,
    pub threshold: f64,
    pub margin: f64,
    pub verdict: bool,
    pub constants_used: Vec<DerivedConstant>,
    /// Local certificates: `min_A T^{1/4} A^{1/2} ||W0||_E + ||1_{|xi|>A} W0||_E`.
    pub split_bound: Option<f64>,
    pub split_cutoff: Option<f64>,
}

impl Certificate {
    fn new(space: String, norm_value: f64, c: f64, constants_used: Vec<DerivedConstant>) -> Self {
        let threshold = 1.0 / (4.0 * c);
        let margin = threshold - norm_value;
        Self {
            space,
            norm_value,
            threshold,
            margin,
            verdict: margin > 0.0,
            constants_used,
            split_bound: None,
            split_cutoff: None,
        }
    }
}

fn weighted_l2(grid: &FrequencyGrid, w: &[f64], weight: &[f64]) -> f64 {
    (w.iter().zip(weight).map(|(a, b)| a * a * b).sum::<f64>() * grid.dxi3()).sqrt()
}

fn symmetrize(grid: &FrequencyGrid, w: &mut [f64]) {
    let copy = w.to_vec();
    for i in 0..grid.len() {
        w[i] = match grid.mirror(i) {
            Some(j) => 0.5 * (copy[i] + copy[j]),
            None => 0.0,
        };
    }
}

fn apply(grid: &FrequencyGrid, w: &[f64], m: &[f64]) -> Result<Vec<f64>> {
    let f = MajorantField { grid: grid.clone(), values: w.to_vec() };
    let (c, _) = convolve_majorants(&f, &f)?;
    Ok(c.values.iter().zip(m).map(|(a, b)| a * b).collect())
}

/// Lattice estimate of `sup_{W >= 0} ||m (W*W)||_{L2(w_out)} / ||W||_{L2(w_in)}^2`
/// by a power iteration on the positive cone, started from several Gaussians.
/// Returns the best ratio and the maximizing profile.
fn power_iteration(
    grid: &FrequencyGrid,
    m: &[f64],
    w_in: &[f64],
    w_out: &[f64],
    iters: usize,
) -> Result<(f64, Vec<Vec<f64>>)> {
    let mut best = 0.0f64;
    let mut profiles = Vec::new();
    for width in [1.0, 2.0, 4.0] {
        let sigma = width * grid.dxi();
        let mut w: Vec<f64> = (0..grid.len())
            .map(|i| if i == 0 { 0.0 } else { (-grid.norm_sq()[i] / (2.0 * sigma * sigma)).exp() })
            .collect();
        symmetrize(grid, &mut w);
        for _ in 0..iters {
            let norm = weighted_l2(grid, &w, w_in);
            if norm == 0.0 {
                break;
            }
            w.iter_mut().for_each(|x| *x /= norm);
            let g = apply(grid, &w, m)?;
            best = best.max(weighted_l2(grid, &g, w_out));
            profiles.push(w.clone());
            let hv: Vec<f64> = g.iter().zip(m).zip(w_out).map(|((a, b), c)| a * b * c).collect();
            let hf = MajorantField { grid: grid.clone(), values: hv };
            let wf = MajorantField { grid: grid.clone(), values: w.clone() };
            let (corr, _) = convolve_majorants(&hf, &wf)?;
            let mut next: Vec<f64> =
                corr.values.iter().zip(w_in).map(|(c, d)| if *d > 0.0 { c / d } else { 0.0 }).collect();
            symmetrize(grid, &mut next);
            w = next;
        }
    }
    Ok((best, profiles))
}

fn powers(grid: &FrequencyGrid, a: f64) -> Vec<f64> {
    (0..grid.len()).map(|i| if i == 0 { 0.0 } else { grid.xi_norm(i).powf(a) }).collect()
}

/// `K(W,W) = (18/(2 pi)^3) (nu |xi|)^{-1} (W*W)`, the stationary form of `B0`.
fn stationary_multiplier(grid: &FrequencyGrid, nu: f64) -> Vec<f64> {
    powers(grid, -1.0).iter().map(|v| b0_prefactor() * v / nu).collect()
}

fn fujita_kato_constant(grid: &FrequencyGrid, nu: f64) -> Result<(f64, Vec<Vec<f64>>)> {
    let w = powers(grid, 1.0);
    power_iteration(grid, &stationary_multiplier(grid, nu), &w, &w, 40)
}

fn herz_constant(grid: &FrequencyGrid, idx: HerzIndex, nu: f64) -> Result<f64> {
    let m = stationary_multiplier(grid, nu);
    let (_, mut family) = fujita_kato_constant(grid, nu)?;
    for j in 0..(grid.n() as f64).log2().ceil() as i32 + 1 {
        let lo = 2f64.powi(j) * grid.dxi();
        family.push(
            (0..grid.len())
                .map(|i| if grid.xi_norm(i) >= lo && grid.xi_norm(i) < 2.0 * lo { 1.0 } else { 0.0 })
                .collect(),
        );
    }
    family.push(powers(grid, -2.0));
    let mut best = 0.0f64;
    for mut w in family {
        symmetrize(grid, &mut w);
        let d = herz(grid, &w, idx)?;
        if d > 0.0 {
            let k = apply(grid, &w, &m)?;
            best = best.max(herz(grid, &k, idx)? / (d * d));
        }
    }
    Ok(best)
}

/// Smallness test `||W0||_E < 1/(4 C_E)` with `C_E` a bound for the stationary
/// majorant operator on `E`.
pub fn global_certificate(w0: &MajorantField, space: Space, nu: f64) -> Result<Certificate> {
    let grid = &w0.grid;
    let w = &w0.values;
    let pref = DerivedConstant::new("b0_prefactor", b0_prefactor(), Provenance::ClosedForm, "18/(2pi)^3");
    let (norm, c, consts) = match space {
        Space::LeJanSznitman => {
            let c0 = ljs_constant(1.0);
            let c = b0_prefactor() * c0 / nu;
            let consts = vec![
                pref,
                DerivedConstant::new("c0", c0, Provenance::Quadrature, "|xi| int deta/(|eta|^2|xi-eta|^2)"),
                DerivedConstant::new("c_space", c, Provenance::Quadrature, "b0_prefactor * c0 / nu"),
            ];
            (lejan(grid, w), c, consts)
        }
        Space::LeiLin => {
            let c = b0_prefactor() / nu;
            let consts = vec![
                pref,
                DerivedConstant::new(
                    "c_space",
                    c,
                    Provenance::ClosedForm,
                    "||W*W||_1 <= ||W||_{L1(dxi/|xi|)} ||W||_{L1(|xi|dxi)}",
                ),
            ];
            (leilin(grid, w), c, consts)
        }
        Space::FujitaKato => {
            let (c, _) = fujita_kato_constant(grid, nu)?;
            let consts = vec![
                pref,
                DerivedConstant::new("c_space", c, Provenance::GridEstimate, "power iteration, H^{1/2} weights"),
            ];
            (sobolev_half(grid, w), c, consts)
        }
        Space::Herz(idx) => {
            let c = herz_constant(grid, idx, nu)?;
            let consts = vec![
                pref,
                DerivedConstant::new("c_space", c, Provenance::GridEstimate, "max ratio over a test family"),
            ];
            (herz(grid, w, idx)?, c, consts)
        }
    };
    Ok(Certificate::new(space.to_string(), norm, c, consts))
}

/// `max_{0 < t <= T} t^{1/4} e^{-nu t r^2}`.
pub fn local_weight(r: f64, t_end: f64, nu: f64) -> f64 {
    let t = if r > 0.0 { t_end.min(1.0 / (4.0 * nu * r * r)) } else { t_end };
    t.powf(0.25) * (-nu * t * r * r).exp()
}

/// Local-in-time certificate on `[0, T]` for the `t^{1/4}`-weighted space.
pub fn local_certificate(w0: &MajorantField, t_end: f64, space: LocalSpace, nu: f64) -> Result<Certificate> {
    if !(t_end > 0.0) {
        return Err(Error::InvalidParameter(format!("T = {t_end}")));
    }
    let grid = &w0.grid;
    let w = &w0.values;
    let s: Vec<f64> = (0..grid.len()).map(|i| local_weight(grid.xi_norm(i), t_end, nu) * w[i]).collect();
    let ck = kernel_sup_constant() * nu.powf(-0.75);
    let b = beta(0.5, 0.25);
    let mut consts = vec![
        DerivedConstant::new("b0_prefactor", b0_prefactor(), Provenance::ClosedForm, "18/(2pi)^3"),
        DerivedConstant::new("kernel_sup", ck, Provenance::ClosedForm, "sup x^{3/4}e^{-x} * nu^{-3/4}"),
        DerivedConstant::new("beta_half_quarter", b, Provenance::ClosedForm, "B(1/2,1/4)"),
    ];
    // E-norm on a subset of modes, and F-norm of the weighted data
    let (norm, c, e_norm): (f64, f64, Box<dyn Fn(&dyn Fn(usize) -> bool) -> f64>) = match space {
        LocalSpace::LeJanSznitmanLocal => {
            let c0p = ljs_local_constant(1.0);
            consts.push(DerivedConstant::new(
                "c0_local",
                c0p,
                Provenance::Quadrature,
                "|xi|^2 int deta/(|eta||xi-eta|)^{5/2}",
            ));
            let f = s.iter().enumerate().map(|(i, v)| grid.xi_norm(i).powf(2.5) * v).fold(0.0, f64::max);
            let e = move |keep: &dyn Fn(usize) -> bool| {
                (0..grid.len()).filter(|&i| keep(i)).map(|i| grid.norm_sq()[i] * w[i]).fold(0.0, f64::max)
            };
            (f, ck * b0_prefactor() * b * c0p, Box::new(e))
        }
        LocalSpace::FujitaKatoLocal => {
            let (k, _) = power_iteration(grid, &vec![1.0; grid.len()], &powers(grid, 2.0), &powers(grid, 1.0), 40)?;
            consts.push(DerivedConstant::new(
                "product_h1_h1",
                k,
                Provenance::GridEstimate,
                "||xi|^{1/2}(W*W)| / ||xi|W|^2",
            ));
            let f = (s.iter().enumerate().map(|(i, v)| grid.norm_sq()[i] * v * v).sum::<f64>() * grid.dxi3()).sqrt();
            let e = move |keep: &dyn Fn(usize) -> bool| {
                ((0..grid.len()).filter(|&i| keep(i)).map(|i| grid.xi_norm(i) * w[i] * w[i]).sum::<f64>() * grid.dxi3())
                    .sqrt()
            };
            (f, ck * b0_prefactor() * b * k, Box::new(e))
        }
    };
    consts.push(DerivedConstant::new(
        "c_space",
        c,
        Provenance::Quadrature,
        "kernel_sup * b0_prefactor * B(1/2,1/4) * product",
    ));
    let full = e_norm(&|_| true);
    let mut radii: Vec<f64> = (0..grid.len()).map(|i| grid.xi_norm(i)).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let (split, cutoff) = radii
        .iter()
        .map(|&a| (t_end.powf(0.25) * a.sqrt() * full + e_norm(&|i| grid.xi_norm(i) > a), a))
        .fold((f64::INFINITY, 0.0), |best, p| if p.0 < best.0 { p } else { best });
    let mut cert = Certificate::new(format!("{space}(T={t_end})"), norm, c, consts);
    cert.split_bound = Some(split);
    cert.split_cutoff = Some(cutoff);
    Ok(cert)
}
