use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft::{fft1, Direction};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplittingReport {
    /// `max |lhs - rhs|` over output frequencies.
    pub residual: f64,
    pub lhs_max: f64,
    /// `e^{sqrt(s) band}` for the occupied input band.
    pub amplification: f64,
}

fn freq(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Spectral coefficients `c_k` with `f(x_j) = sum_k c_k e^{i k x_j}`.
fn spectrum(f: &[Complex64]) -> Vec<Complex64> {
    let mut c = f.to_vec();
    fft1(&mut c, Direction::Forward);
    let s = 1.0 / f.len() as f64;
    c.iter_mut().for_each(|z| *z *= s);
    c
}

/// Exact linear convolution of two spectra (products of the signals); outputs
/// outside the lattice are dropped, which never happens in band.
fn product(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, x) in a.iter().enumerate() {
        if x.norm() == 0.0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let k = freq(i, n) + freq(j, n);
            if k >= -(n as i64) / 2 && k < n as i64 / 2 {
                out[k.rem_euclid(n as i64) as usize] += x * y;
            }
        }
    }
    out
}

fn weight(c: &[Complex64], f: impl Fn(i64) -> f64) -> Vec<Complex64> {
    let n = c.len();
    c.iter().enumerate().map(|(i, z)| z * f(freq(i, n))).collect()
}

/// Check `W(Zf Zg) = Sf Sg + Tf Tg + S(Sf Z^2Tg) + S(Z^2Tf Sg) + T(Z^2Sf Tg) + T(Tf Z^2Sg)`
/// with `S` the projection on frequencies `>= 0`, `T = 1 - S`,
/// `Z = e^{-sqrt(s)|xi|}` and `W = e^{sqrt(s)|xi|}`, on signals sampled at
/// `x_j = 2 pi j / n` and band-limited to `|xi| <= n/6`.
pub fn splitting_identity_check(f: &[Complex64], g: &[Complex64], s: f64) -> Result<SplittingReport> {
    let n = f.len();
    if g.len() != n || n < 6 {
        return Err(Error::InvalidParameter(format!("signal lengths {} and {}", n, g.len())));
    }
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("s = {s}")));
    }
    let (cf, cg) = (spectrum(f), spectrum(g));
    let band = n as i64 / 6;
    let scale = cf.iter().chain(&cg).map(|z| z.norm()).fold(0.0, f64::max);
    for (i, z) in cf.iter().chain(&cg).enumerate() {
        if freq(i % n, n).abs() > band && z.norm() > 1e-12 * scale {
            return Err(Error::BandViolation(format!("frequency {} exceeds n/6 = {band}", freq(i % n, n))));
        }
    }
    let r = s.sqrt();
    let z = |k: i64| (-r * k.abs() as f64).exp();
    let z2 = |k: i64| (-2.0 * r * k.abs() as f64).exp();
    let s_proj = |k: i64| if k >= 0 { 1.0 } else { 0.0 };
    let t_proj = |k: i64| if k < 0 { 1.0 } else { 0.0 };
    let (sf, tf) = (weight(&cf, s_proj), weight(&cf, t_proj));
    let (sg, tg) = (weight(&cg, s_proj), weight(&cg, t_proj));
    let lhs = weight(&product(&weight(&cf, z), &weight(&cg, z)), |k| (r * k.abs() as f64).exp());
    let terms = [
        product(&sf, &sg),
        product(&tf, &tg),
        weight(&product(&sf, &weight(&tg, z2)), s_proj),
        weight(&product(&weight(&tf, z2), &sg), s_proj),
        weight(&product(&weight(&sf, z2), &tg), t_proj),
        weight(&product(&tf, &weight(&sg, z2)), t_proj),
    ];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for t in &terms {
        rhs.iter_mut().zip(t).for_each(|(a, b)| *a += b);
    }
    // compare as physical samples
    let to_phys = |c: &[Complex64]| {
        let mut v = c.to_vec();
        fft1(&mut v, Direction::Inverse);
        v
    };
    let (pl, pr) = (to_phys(&lhs), to_phys(&rhs));
    let residual = pl.iter().zip(&pr).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let lhs_max = pl.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SplittingReport { residual, lhs_max, amplification: (r * band as f64).exp() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn mode(n: usize, k: i64) -> Vec<Complex64> {
        (0..n).map(|j| Complex64::new(0.0, 2.0 * PI * (k * j as i64) as f64 / n as f64).exp()).collect()
    }

    #[test]
    fn single_modes() {
        let r = splitting_identity_check(&mode(32, 2), &mode(32, 3), 1.0).unwrap();
        assert!(r.residual <= 1e-12);
        assert!((r.lhs_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_and_band() {
        let z = vec![Complex64::new(0.0, 0.0); 32];
        assert_eq!(splitting_identity_check(&z, &mode(32, 1), 0.1).unwrap().residual, 0.0);
        assert!(matches!(splitting_identity_check(&mode(32, 7), &z, 0.1), Err(Error::BandViolation(_))));
    }
}
