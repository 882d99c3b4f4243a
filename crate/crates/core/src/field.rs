//! Field containers on a [`FrequencyGrid`] and the spectral/physical transform pair.
//!
//! Spectral coefficients carry the units of the continuous transform
//! `F_x u(xi) = int u(x) e^{-i x.xi} dx`; on the periodic box this means
//! `U_k = int_box u e^{-i xi_k . x} dx` and `u(x) = L^{-3} sum_k U_k e^{i xi_k . x}`,
//! so `(1/(2 pi)^3) int F(eta) G(xi - eta) d eta` becomes
//! `(dxi^3/(2 pi)^3) sum_eta F G`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft::{fft3, Direction};
use crate::grid::FrequencyGrid;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const DIVERGENCE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Complex spectral array on the lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralScalar {
    pub grid: FrequencyGrid,
    pub coeffs: Vec<Complex64>,
}

impl SpectralScalar {
    pub fn zeros(grid: &FrequencyGrid) -> Self {
        Self { grid: grid.clone(), coeffs: vec![ZERO; grid.len()] }
    }

    pub fn new(grid: &FrequencyGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for {} lattice points",
                coeffs.len(),
                grid.len()
            )));
        }
        Ok(Self { grid: grid.clone(), coeffs })
    }

    pub fn from_fn(grid: &FrequencyGrid, f: impl Fn([f64; 3]) -> Complex64) -> Self {
        let coeffs = (0..grid.len()).map(|i| f(grid.xi(i))).collect();
        Self { grid: grid.clone(), coeffs }
    }

    /// A single lattice mode with the given coefficient.
    pub fn single_mode(grid: &FrequencyGrid, k: [i64; 3], value: Complex64) -> Result<Self> {
        let idx =
            grid.index_of_freq(k).ok_or_else(|| Error::InvalidParameter(format!("frequency {k:?} outside lattice")))?;
        let mut s = Self::zeros(grid);
        s.coeffs[idx] = value;
        Ok(s)
    }

    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.grid, &self.coeffs)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL * self.max_modulus().max(f64::MIN_POSITIVE)
    }

    pub fn zero_nyquist(&mut self) {
        zero_nyquist(&self.grid, &mut self.coeffs);
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { grid: self.grid.clone(), coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    pub fn to_physical(&self) -> PhysicalField {
        to_physical(&self.grid, &self.coeffs)
    }

    pub fn from_physical(field: &PhysicalField) -> Self {
        Self { grid: field.grid.clone(), coeffs: from_physical(field) }
    }
}

/// Three spectral component arrays `U = F_x u` with declared invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVectorField {
    pub grid: FrequencyGrid,
    pub comps: [Vec<Complex64>; 3],
    hermitian: bool,
    divergence_free: bool,
}

impl SpectralVectorField {
    pub fn zeros(grid: &FrequencyGrid) -> Self {
        let z = vec![ZERO; grid.len()];
        Self { grid: grid.clone(), comps: [z.clone(), z.clone(), z], hermitian: true, divergence_free: true }
    }

    /// Build a field without asserting any invariant.
    pub fn new(grid: &FrequencyGrid, comps: [Vec<Complex64>; 3]) -> Result<Self> {
        for c in &comps {
            if c.len() != grid.len() {
                return Err(Error::GridMismatch(format!("{} coefficients for {} lattice points", c.len(), grid.len())));
            }
        }
        Ok(Self { grid: grid.clone(), comps, hermitian: false, divergence_free: false })
    }

    /// Build a field and validate the requested invariants.
    pub fn new_checked(
        grid: &FrequencyGrid,
        comps: [Vec<Complex64>; 3],
        hermitian: bool,
        divergence_free: bool,
    ) -> Result<Self> {
        let mut f = Self::new(grid, comps)?;
        if hermitian {
            f.assert_hermitian()?;
            f.hermitian = true;
        }
        if divergence_free {
            f.assert_divergence_free()?;
            f.divergence_free = true;
        }
        Ok(f)
    }

    /// Mark invariants that hold by construction.
    pub(crate) fn with_flags(mut self, hermitian: bool, divergence_free: bool) -> Self {
        self.hermitian = hermitian;
        self.divergence_free = divergence_free;
        self
    }

    /// Re-detect both flags from the data.
    pub fn detect_flags(mut self) -> Self {
        self.hermitian = self.assert_hermitian().is_ok();
        self.divergence_free = self.assert_divergence_free().is_ok();
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_free
    }

    pub fn max_modulus(&self) -> f64 {
        (0..self.grid.len()).map(|i| self.modulus_at(i)).fold(0.0, f64::max)
    }

    pub fn modulus_at(&self, i: usize) -> f64 {
        (self.comps[0][i].norm_sqr() + self.comps[1][i].norm_sqr() + self.comps[2][i].norm_sqr()).sqrt()
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.comps.iter().map(|c| hermitian_defect(&self.grid, c)).fold(0.0, f64::max)
    }

    /// `max_k |xi . U(k)|`.
    pub fn divergence_residual(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| {
                let xi = self.grid.xi(i);
                (self.comps[0][i] * xi[0] + self.comps[1][i] * xi[1] + self.comps[2][i] * xi[2]).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn assert_hermitian(&self) -> Result<()> {
        let d = self.hermitian_defect();
        if d <= HERMITIAN_TOL * self.max_modulus() {
            Ok(())
        } else {
            Err(Error::NotHermitian(d))
        }
    }

    pub fn assert_divergence_free(&self) -> Result<()> {
        let r = self.divergence_residual();
        let scale = self.max_modulus();
        if r <= DIVERGENCE_TOL * scale {
            Ok(())
        } else {
            Err(Error::NotDivergenceFree { residual: r, scale })
        }
    }

    /// Euclidean modulus `|U(xi)|` per lattice point.
    pub fn modulus(&self) -> MajorantField {
        MajorantField { grid: self.grid.clone(), values: (0..self.grid.len()).map(|i| self.modulus_at(i)).collect() }
    }

    pub fn zero_nyquist(&mut self) {
        for c in self.comps.iter_mut() {
            zero_nyquist(&self.grid, c);
        }
    }

    pub fn scale(&self, a: f64) -> Self {
        let comps = self.comps.clone().map(|c| c.into_iter().map(|z| z * a).collect());
        Self { comps, ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        for d in 0..3 {
            for (a, b) in out.comps[d].iter_mut().zip(&other.comps[d]) {
                *a -= b;
            }
        }
        out.hermitian = self.hermitian && other.hermitian;
        out.divergence_free = self.divergence_free && other.divergence_free;
        Ok(out)
    }

    pub fn component(&self, d: usize) -> SpectralScalar {
        SpectralScalar { grid: self.grid.clone(), coeffs: self.comps[d].clone() }
    }

    pub fn to_physical(&self) -> [PhysicalField; 3] {
        [0, 1, 2].map(|d| to_physical(&self.grid, &self.comps[d]))
    }

    pub fn from_physical(fields: &[PhysicalField; 3]) -> Result<Self> {
        fields[0].grid.check_same(&fields[1].grid)?;
        fields[0].grid.check_same(&fields[2].grid)?;
        let comps = [0, 1, 2].map(|d| from_physical(&fields[d]));
        Ok(Self::new(&fields[0].grid, comps)?.detect_flags())
    }
}

/// Count of round-off clamps applied while building a majorant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ClampStats {
    /// Negatives in `[-CLAMP_REL * max, -FLUSH_REL * max)` set to zero.
    pub count: usize,
    /// Negatives at transform noise level (`> -FLUSH_REL * max`) set to zero.
    pub flushed: usize,
    pub floor: f64,
}

impl ClampStats {
    pub fn merge(&mut self, other: ClampStats) {
        self.count += other.count;
        self.flushed += other.flushed;
        self.floor = self.floor.max(other.floor);
    }
}

/// Relative clamp threshold: entries in `(-1e-13 * max, 0)` are round-off.
pub const CLAMP_REL: f64 = 1e-13;
/// Transform noise level (64 ulp of the maximum); negatives above it are flushed silently.
pub const FLUSH_REL: f64 = 64.0 * f64::EPSILON;

/// Nonnegative real array on the lattice (`W^0`, `W`, `Z`).
#[derive(Clone, Debug, PartialEq)]
pub struct MajorantField {
    pub grid: FrequencyGrid,
    pub values: Vec<f64>,
}

impl MajorantField {
    pub fn zeros(grid: &FrequencyGrid) -> Self {
        Self { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    /// Strict constructor: every entry must be finite and `>= 0`.
    pub fn new(grid: &FrequencyGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} values for {} lattice points", values.len(), grid.len())));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::NegativeMajorant { value: *v, floor: 0.0 });
        }
        Ok(Self { grid: grid.clone(), values })
    }

    /// Constructor for computed data: clamps round-off negatives and counts them.
    pub fn clamped(grid: &FrequencyGrid, mut values: Vec<f64>) -> Result<(Self, ClampStats)> {
        let stats = clamp_roundoff(&mut values)?;
        Ok((Self { grid: grid.clone(), values }, stats))
    }

    pub fn from_fn(grid: &FrequencyGrid, f: impl Fn([f64; 3]) -> f64) -> Result<Self> {
        Self::new(grid, (0..grid.len()).map(|i| f(grid.xi(i))).collect())
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|v| v * a).collect() }
    }

    pub fn as_spectral(&self) -> SpectralScalar {
        SpectralScalar {
            grid: self.grid.clone(),
            coeffs: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    /// Pointwise `self <= other + tol`.
    pub fn dominated_by(&self, other: &MajorantField, tol: f64) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| *a <= *b + tol)
    }
}

pub(crate) fn clamp_roundoff(values: &mut [f64]) -> Result<ClampStats> {
    let max = values.iter().cloned().fold(0.0, f64::max);
    let floor = CLAMP_REL * max;
    let noise = FLUSH_REL * max;
    let mut count = 0;
    let mut flushed = 0;
    for v in values.iter_mut() {
        if !v.is_finite() {
            return Err(Error::NegativeMajorant { value: *v, floor });
        }
        if *v < 0.0 {
            if *v >= -noise {
                *v = 0.0;
                flushed += 1;
            } else if *v > -floor {
                *v = 0.0;
                count += 1;
            } else {
                return Err(Error::NegativeMajorant { value: *v, floor });
            }
        }
    }
    Ok(ClampStats { count, flushed, floor })
}

/// Samples on the physical points `x_j = (L/n) j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField {
    pub grid: FrequencyGrid,
    pub values: Vec<Complex64>,
}

impl PhysicalField {
    pub fn from_real(grid: &FrequencyGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} samples for {} points", values.len(), grid.len())));
        }
        Ok(Self { grid: grid.clone(), values: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect() })
    }

    pub fn from_fn(grid: &FrequencyGrid, f: impl Fn([f64; 3]) -> f64) -> Self {
        Self { grid: grid.clone(), values: (0..grid.len()).map(|i| Complex64::new(f(grid.x(i)), 0.0)).collect() }
    }

    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.re).collect()
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.norm()).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `(int |f|^p dx)^{1/p}` by the point rule; `p = inf` gives the max.
    pub fn lp_norm(&self, p: f64) -> f64 {
        lp_norm(&self.abs(), self.grid.dx3(), p)
    }
}

pub(crate) fn lp_norm(abs: &[f64], weight: f64, p: f64) -> f64 {
    if p.is_infinite() {
        abs.iter().cloned().fold(0.0, f64::max)
    } else {
        let scale = abs.iter().cloned().fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let s: f64 = abs.iter().map(|a| (a / scale).powf(p)).sum();
        scale * (s * weight).powf(1.0 / p)
    }
}

/// `u(x_j) = L^{-3} sum_k U_k e^{i xi_k . x_j}`.
pub fn to_physical(grid: &FrequencyGrid, coeffs: &[Complex64]) -> PhysicalField {
    let mut data = coeffs.to_vec();
    fft3(&mut data, grid.n(), Direction::Inverse);
    let s = 1.0 / grid.length().powi(3);
    data.iter_mut().for_each(|c| *c *= s);
    PhysicalField { grid: grid.clone(), values: data }
}

/// `U_k = (L/n)^3 sum_j u(x_j) e^{-i xi_k . x_j}`.
pub fn from_physical(field: &PhysicalField) -> Vec<Complex64> {
    let mut data = field.values.clone();
    fft3(&mut data, field.grid.n(), Direction::Forward);
    let s = field.grid.dx3();
    data.iter_mut().for_each(|c| *c *= s);
    data
}

pub(crate) fn hermitian_defect(grid: &FrequencyGrid, c: &[Complex64]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..grid.len() {
        if let Some(m) = grid.mirror(i) {
            worst = worst.max((c[m] - c[i].conj()).norm());
        }
    }
    worst
}

pub(crate) fn zero_nyquist(grid: &FrequencyGrid, c: &mut [Complex64]) {
    for (i, z) in c.iter_mut().enumerate() {
        if grid.on_nyquist(i) {
            *z = ZERO;
        }
    }
}
