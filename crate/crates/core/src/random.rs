//! Seeded generators for randomized suites.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{MajorantField, PhysicalField, SpectralScalar, SpectralVectorField};
use crate::grid::FrequencyGrid;
use crate::spectral::leray_project;

/// ChaCha8 stream keyed by a 64-bit seed; the only randomness source in the crate.
pub struct FieldRng {
    rng: ChaCha8Rng,
}

impl FieldRng {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn normal(&mut self) -> f64 {
        // Box-Muller
        let u1: f64 = self.rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = self.rng.gen::<f64>();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn complex_array(&mut self, grid: &FrequencyGrid) -> Vec<Complex64> {
        (0..grid.len()).map(|_| Complex64::new(self.normal(), self.normal())).collect()
    }

    /// Hermitian scalar spectrum supported on integer frequencies with `|k|_inf <= kmax`,
    /// Nyquist planes and (optionally) the zero mode removed.
    pub fn hermitian_scalar(&mut self, grid: &FrequencyGrid, kmax: i64, zero_mean: bool) -> SpectralScalar {
        let raw = self.complex_array(grid);
        let mut c = vec![Complex64::new(0.0, 0.0); grid.len()];
        for i in 0..grid.len() {
            let k = grid.freq_of_index(i);
            if k.iter().any(|v| v.abs() > kmax) {
                continue;
            }
            if let Some(m) = grid.mirror(i) {
                c[i] = (raw[i] + raw[m].conj()) * 0.5;
            }
        }
        if zero_mean {
            c[0] = Complex64::new(0.0, 0.0);
        }
        SpectralScalar { grid: grid.clone(), coeffs: c }
    }

    /// Hermitian divergence-free field with sup modulus `amplitude`, band `|k|_inf <= kmax`.
    pub fn divergence_free_field(&mut self, grid: &FrequencyGrid, kmax: i64, amplitude: f64) -> SpectralVectorField {
        let comps = [0, 1, 2].map(|_| self.hermitian_scalar(grid, kmax, true).coeffs);
        let v = SpectralVectorField::new(grid, comps).expect("sizes match").with_flags(true, false);
        let p = leray_project(&v);
        let m = p.max_modulus();
        if m == 0.0 {
            return p;
        }
        p.scale(amplitude / m)
    }

    /// Nonnegative radial-envelope majorant `amp * s(xi) e^{-|xi|^2 / (2 w^2)}`, with
    /// `s` uniform in `[0.5, 1]` and the zero mode set to 0.
    pub fn majorant(&mut self, grid: &FrequencyGrid, amplitude: f64, width: f64) -> MajorantField {
        let mut v: Vec<f64> = (0..grid.len())
            .map(|i| amplitude * self.uniform(0.5, 1.0) * (-grid.norm_sq()[i] / (2.0 * width * width)).exp())
            .collect();
        v[0] = 0.0;
        MajorantField::new(grid, v).expect("nonnegative by construction")
    }

    /// Real band-limited zero-mean physical field with max modulus 1.
    pub fn band_limited_physical(&mut self, grid: &FrequencyGrid, kmax: i64) -> PhysicalField {
        let s = self.hermitian_scalar(grid, kmax, true);
        let mut p = s.to_physical();
        let m = p.max_abs();
        p.values.iter_mut().for_each(|c| *c = Complex64::new(c.re / m, 0.0));
        p
    }
}
