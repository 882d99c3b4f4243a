//! Lattice convolution, heat semigroup, Fourier multipliers, Leray projection
//! and pressure recovery.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{fft3, pad, padded_size, truncate, Direction};
use crate::field::{clamp_roundoff, ClampStats, MajorantField, SpectralScalar, SpectralVectorField};
use crate::grid::FrequencyGrid;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `(2 pi)^3`.
pub fn two_pi_cubed() -> f64 {
    (2.0 * PI).powi(3)
}

/// Padded physical samples of a lattice array, ready for pointwise products.
pub(crate) fn padded_physical(grid: &FrequencyGrid, coeffs: &[Complex64]) -> Vec<Complex64> {
    let m = padded_size(grid.n());
    let mut p = pad(coeffs, grid.n(), m);
    fft3(&mut p, m, Direction::Inverse);
    p
}

/// Turn a product of two [`padded_physical`] arrays back into the lattice
/// convolution `dxi^3 sum_eta F(eta) G(xi - eta)`.
pub(crate) fn product_to_convolution(grid: &FrequencyGrid, mut prod: Vec<Complex64>) -> Vec<Complex64> {
    let m = padded_size(grid.n());
    fft3(&mut prod, m, Direction::Forward);
    let s = grid.dxi3() / (m * m * m) as f64;
    let mut out = truncate(&prod, m, grid.n());
    out.iter_mut().for_each(|c| *c *= s);
    out
}

pub(crate) fn convolve_raw(grid: &FrequencyGrid, f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    let pf = padded_physical(grid, f);
    let pg = padded_physical(grid, g);
    let prod = pf.iter().zip(&pg).map(|(a, b)| a * b).collect();
    product_to_convolution(grid, prod)
}

/// `int F(eta) G(xi - eta) d eta` realized as `dxi^3` times the lattice sum over
/// all `eta` with `xi - eta` in the lattice, evaluated by a 3/2 zero-padded
/// transform product (exact for every retained output mode).
pub fn convolve(f: &SpectralScalar, g: &SpectralScalar) -> Result<SpectralScalar> {
    f.grid.check_same(&g.grid)?;
    Ok(SpectralScalar { grid: f.grid.clone(), coeffs: convolve_raw(&f.grid, &f.coeffs, &g.coeffs) })
}

/// Convolution of nonnegative arrays; round-off negatives are clamped and counted.
pub fn convolve_majorants(w: &MajorantField, v: &MajorantField) -> Result<(MajorantField, ClampStats)> {
    w.grid.check_same(&v.grid)?;
    let grid = &w.grid;
    let pw = padded_physical(grid, &w.as_spectral().coeffs);
    let prod = if std::ptr::eq(w, v) {
        pw.iter().map(|a| a * a).collect()
    } else {
        let pv = padded_physical(grid, &v.as_spectral().coeffs);
        pw.iter().zip(&pv).map(|(a, b)| a * b).collect()
    };
    let c = product_to_convolution(grid, prod);
    let mut values: Vec<f64> = c.iter().map(|z| z.re).collect();
    let stats = clamp_roundoff(&mut values)?;
    Ok((MajorantField { grid: grid.clone(), values }, stats))
}

/// Pointwise multiplication by `e^{-nu t |xi|^2}`.
pub fn heat_semigroup(f: &SpectralScalar, t: f64, nu: f64) -> Result<SpectralScalar> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let k = f.grid.norm_sq();
    let coeffs = f.coeffs.iter().zip(k).map(|(c, k2)| c * (-nu * t * k2).exp()).collect();
    Ok(SpectralScalar { grid: f.grid.clone(), coeffs })
}

pub(crate) fn heat_factors(grid: &FrequencyGrid, t: f64, nu: f64) -> Vec<f64> {
    grid.norm_sq().iter().map(|k2| (-nu * t * k2).exp()).collect()
}

pub fn heat_semigroup_vector(v: &SpectralVectorField, t: f64, nu: f64) -> Result<SpectralVectorField> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let h = heat_factors(&v.grid, t, nu);
    let mut out = v.clone();
    for c in out.comps.iter_mut() {
        c.iter_mut().zip(&h).for_each(|(z, e)| *z *= e);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GevreySign {
    /// `e^{+sigma |xi|}`
    Grow,
    /// `e^{-sigma |xi|}`
    Damp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightNorm {
    Euclidean,
    /// `|xi_1| + |xi_2| + |xi_3|`
    L1,
}

/// Frequency symbols supported by [`fourier_multiplier`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Symbol {
    /// `i xi_j / |xi|`, axis `j` in `0..3`.
    Riesz(usize),
    /// `|xi|^{-alpha}`, `0 < alpha < 3`.
    RieszPotential(f64),
    /// `|xi|^s`.
    SqrtLaplacianPower(f64),
    /// `e^{+- sigma |xi|}` in the chosen norm.
    GevreyWeight { sigma: f64, sign: GevreySign, norm: WeightNorm },
}

impl Symbol {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Symbol::Riesz(j) if j > 2 => Err(Error::InvalidParameter(format!("Riesz axis {j}"))),
            Symbol::RieszPotential(a) if !(a > 0.0 && a < 3.0) => Err(Error::RieszOrderOutOfRange(a)),
            Symbol::GevreyWeight { sigma, .. } if !(sigma >= 0.0) => {
                Err(Error::InvalidParameter(format!("Gevrey sigma {sigma}")))
            }
            _ => Ok(()),
        }
    }

    /// Symbol value at `xi`; singular symbols give 0 at the origin.
    pub fn eval(&self, xi: [f64; 3]) -> Complex64 {
        let n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        let r = n2.sqrt();
        match *self {
            Symbol::Riesz(j) => {
                if r == 0.0 {
                    ZERO
                } else {
                    Complex64::new(0.0, xi[j] / r)
                }
            }
            Symbol::RieszPotential(a) => {
                if r == 0.0 {
                    ZERO
                } else {
                    Complex64::new(r.powf(-a), 0.0)
                }
            }
            Symbol::SqrtLaplacianPower(s) => {
                if r == 0.0 {
                    if s > 0.0 {
                        ZERO
                    } else if s == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        ZERO
                    }
                } else {
                    Complex64::new(r.powf(s), 0.0)
                }
            }
            Symbol::GevreyWeight { sigma, sign, norm } => {
                let w = match norm {
                    WeightNorm::Euclidean => r,
                    WeightNorm::L1 => xi[0].abs() + xi[1].abs() + xi[2].abs(),
                };
                let e = match sign {
                    GevreySign::Grow => sigma * w,
                    GevreySign::Damp => -sigma * w,
                };
                Complex64::new(e.exp(), 0.0)
            }
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Riesz(j) => write!(f, "riesz_{}", j + 1),
            Symbol::RieszPotential(a) => write!(f, "riesz_potential:{a}"),
            Symbol::SqrtLaplacianPower(s) => write!(f, "sqrt_laplacian:{s}"),
            Symbol::GevreyWeight { sigma, sign, norm } => write!(
                f,
                "gevrey:{sigma}:{}:{}",
                if *sign == GevreySign::Grow { "+" } else { "-" },
                if *norm == WeightNorm::L1 { "l1" } else { "euclid" }
            ),
        }
    }
}

impl FromStr for Symbol {
    type Err = Error;

    /// `riesz_1..3`, `riesz_potential:ALPHA`, `sqrt_laplacian:S`, `gevrey:SIGMA:+|-[:l1|euclid]`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |i: usize| -> Result<f64> {
            parts
                .get(i)
                .ok_or_else(|| Error::InvalidParameter(format!("symbol {s}: missing parameter")))?
                .parse::<f64>()
                .map_err(|e| Error::InvalidParameter(format!("symbol {s}: {e}")))
        };
        let sym = match parts[0] {
            "riesz_1" => Symbol::Riesz(0),
            "riesz_2" => Symbol::Riesz(1),
            "riesz_3" => Symbol::Riesz(2),
            "riesz_potential" => Symbol::RieszPotential(num(1)?),
            "sqrt_laplacian" => Symbol::SqrtLaplacianPower(num(1)?),
            "gevrey" => {
                let sign = match parts.get(2).copied() {
                    Some("+") => GevreySign::Grow,
                    Some("-") => GevreySign::Damp,
                    other => return Err(Error::InvalidParameter(format!("gevrey sign {other:?}"))),
                };
                let norm = match parts.get(3).copied() {
                    None | Some("euclid") => WeightNorm::Euclidean,
                    Some("l1") => WeightNorm::L1,
                    Some(o) => return Err(Error::InvalidParameter(format!("gevrey norm {o}"))),
                };
                Symbol::GevreyWeight { sigma: num(1)?, sign, norm }
            }
            other => return Err(Error::InvalidParameter(format!("unknown symbol {other}"))),
        };
        sym.validate()?;
        Ok(sym)
    }
}

pub fn fourier_multiplier(f: &SpectralScalar, symbol: Symbol) -> Result<SpectralScalar> {
    symbol.validate()?;
    let coeffs = f.coeffs.iter().enumerate().map(|(i, c)| c * symbol.eval(f.grid.xi(i))).collect();
    Ok(SpectralScalar { grid: f.grid.clone(), coeffs })
}

/// `P = Id - xi xi^T / |xi|^2`; the zero mode passes through unchanged.
pub fn leray_project(v: &SpectralVectorField) -> SpectralVectorField {
    let grid = &v.grid;
    let mut out = v.clone();
    for i in 0..grid.len() {
        let k2 = grid.norm_sq()[i];
        if k2 == 0.0 {
            continue;
        }
        let xi = grid.xi(i);
        let dot = (v.comps[0][i] * xi[0] + v.comps[1][i] * xi[1] + v.comps[2][i] * xi[2]) / k2;
        for d in 0..3 {
            out.comps[d][i] = v.comps[d][i] - dot * xi[d];
        }
    }
    let herm = v.is_hermitian();
    out.with_flags(herm, true)
}

/// `F_x p = -sum_{j,k} xi_j xi_k F_x(u_j u_k) / |xi|^2`, zero mode 0.
pub fn pressure_from_velocity(u: &SpectralVectorField) -> Result<SpectralScalar> {
    u.assert_divergence_free()?;
    let grid = &u.grid;
    let phys: Vec<Vec<Complex64>> = u.comps.iter().map(|c| padded_physical(grid, c)).collect();
    let inv = 1.0 / two_pi_cubed();
    let mut p = vec![ZERO; grid.len()];
    for j in 0..3 {
        for k in j..3 {
            let prod = phys[j].iter().zip(&phys[k]).map(|(a, b)| a * b).collect();
            let ujk = product_to_convolution(grid, prod);
            let mult = if j == k { 1.0 } else { 2.0 };
            for i in 0..grid.len() {
                let k2 = grid.norm_sq()[i];
                if k2 == 0.0 {
                    continue;
                }
                let xi = grid.xi(i);
                p[i] -= ujk[i] * (mult * inv * xi[j] * xi[k] / k2);
            }
        }
    }
    let mut s = SpectralScalar { grid: grid.clone(), coeffs: p };
    s.zero_nyquist();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::FieldRng;

    fn direct_convolution(grid: &FrequencyGrid, f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; grid.len()];
        for k in 0..grid.len() {
            let kk = grid.freq_of_index(k);
            let mut acc = ZERO;
            for a in 0..grid.len() {
                let ka = grid.freq_of_index(a);
                if let Some(b) = grid.index_of_freq([kk[0] - ka[0], kk[1] - ka[1], kk[2] - ka[2]]) {
                    acc += f[a] * g[b];
                }
            }
            out[k] = acc * grid.dxi3();
        }
        out
    }

    #[test]
    fn convolution_matches_direct_sum() {
        let grid = FrequencyGrid::new(8, 3.0).unwrap();
        let mut rng = FieldRng::new(11);
        let f = rng.complex_array(&grid);
        let g = rng.complex_array(&grid);
        let fast = convolve_raw(&grid, &f, &g);
        let slow = direct_convolution(&grid, &f, &g);
        let scale = slow.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let err = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err <= 1e-12 * scale, "err {err} scale {scale}");
    }

    #[test]
    fn convolution_with_zero() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let f = FieldRng::new(1).complex_array(&grid);
        let z = vec![ZERO; grid.len()];
        assert!(convolve_raw(&grid, &f, &z).iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn heat_rejects_negative_time() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let f = SpectralScalar::zeros(&grid);
        assert_eq!(heat_semigroup(&f, -1.0, 1.0).unwrap_err(), Error::NegativeTime(-1.0));
    }

    #[test]
    fn gaussian_heat_exponent_addition() {
        let grid = FrequencyGrid::new(16, 2.0 * PI).unwrap();
        let f = SpectralScalar::from_fn(&grid, |xi| {
            Complex64::new((-(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) / 2.0).exp(), 0.0)
        });
        let h = heat_semigroup(&f, 1.0, 1.0).unwrap();
        for i in 0..grid.len() {
            let e = (-1.5 * grid.norm_sq()[i]).exp();
            assert!((h.coeffs[i].re - e).abs() <= 1e-15 * e.max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn riesz_potential_halves_at_two() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let s = SpectralScalar::single_mode(&grid, [2, 0, 0], Complex64::new(3.0, 1.0)).unwrap();
        let r = fourier_multiplier(&s, Symbol::RieszPotential(1.0)).unwrap();
        let idx = grid.index_of_freq([2, 0, 0]).unwrap();
        assert!((r.coeffs[idx] - Complex64::new(1.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn symbol_errors() {
        assert_eq!(Symbol::RieszPotential(3.0).validate().unwrap_err(), Error::RieszOrderOutOfRange(3.0));
        assert!("bogus".parse::<Symbol>().is_err());
        assert!("riesz_potential:0".parse::<Symbol>().is_err());
        assert_eq!("riesz_2".parse::<Symbol>().unwrap(), Symbol::Riesz(1));
        let g: Symbol = "gevrey:0.5:-:l1".parse().unwrap();
        assert_eq!(g.to_string().parse::<Symbol>().unwrap(), g);
    }

    #[test]
    fn pressure_rejects_compressible_input() {
        let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        let mut u = SpectralVectorField::zeros(&grid);
        let idx = grid.index_of_freq([1, 0, 0]).unwrap();
        u.comps[0][idx] = Complex64::new(1.0, 0.0);
        assert!(matches!(pressure_from_velocity(&u), Err(Error::NotDivergenceFree { .. })));
    }
}
