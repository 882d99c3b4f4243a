//! Truncated frequency lattice and its matching physical grid.
//!
//! Arrays are stored row-major over `(i0, i1, i2)`; index `i` along an axis
//! carries the integer frequency `i` for `i < n/2` and `i - n` otherwise, so
//! the lattice is `[-n/2, n/2)^3` and the `-n/2` planes have no symmetric
//! partner.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug)]
struct Tables {
    /// Wavenumber per axis index.
    axis: Vec<f64>,
    /// |xi|^2 per lattice point.
    norm_sq: Vec<f64>,
}

/// Frequency lattice `xi_k = (2 pi / L) k`, `k in [-n/2, n/2)^3`, with the
/// physical points `x_j = (L / n) j`.
#[derive(Clone, Debug)]
pub struct FrequencyGrid {
    n: usize,
    length: f64,
    tables: Arc<Tables>,
}

impl PartialEq for FrequencyGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

impl FrequencyGrid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::OddGridSize(n));
        }
        if !(8..=256).contains(&n) {
            return Err(Error::GridSizeOutOfRange(n));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::NonPositiveLength(length));
        }
        let dxi = 2.0 * PI / length;
        let axis: Vec<f64> = (0..n).map(|i| dxi * signed_index(i, n) as f64).collect();
        let mut norm_sq = Vec::with_capacity(n * n * n);
        for a in &axis {
            for b in &axis {
                for c in &axis {
                    norm_sq.push(a * a + b * b + c * c);
                }
            }
        }
        Ok(Self { n, length, tables: Arc::new(Tables { axis, norm_sq }) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Frequency spacing `2 pi / L`.
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Frequency cell volume `dxi^3`; lattice sums times this realize integrals in xi.
    pub fn dxi3(&self) -> f64 {
        self.dxi().powi(3)
    }

    /// Physical spacing `L / n`.
    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn dx3(&self) -> f64 {
        self.dx().powi(3)
    }

    /// Wavenumbers along one axis in storage order.
    pub fn axis_wavenumbers(&self) -> &[f64] {
        &self.tables.axis
    }

    /// Integer frequencies along one axis in increasing order, `-n/2 .. n/2 - 1`.
    pub fn axis_frequencies_sorted(&self) -> Vec<i64> {
        let h = (self.n / 2) as i64;
        (-h..h).collect()
    }

    pub fn norm_sq(&self) -> &[f64] {
        &self.tables.norm_sq
    }

    pub fn index(&self, i0: usize, i1: usize, i2: usize) -> usize {
        (i0 * self.n + i1) * self.n + i2
    }

    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    /// Storage index of the integer frequency triple `k` (must lie in the lattice).
    pub fn index_of_freq(&self, k: [i64; 3]) -> Option<usize> {
        let h = (self.n / 2) as i64;
        let mut ix = [0usize; 3];
        for d in 0..3 {
            if k[d] < -h || k[d] >= h {
                return None;
            }
            ix[d] = k[d].rem_euclid(self.n as i64) as usize;
        }
        Some(self.index(ix[0], ix[1], ix[2]))
    }

    pub fn freq_of_index(&self, idx: usize) -> [i64; 3] {
        let u = self.unravel(idx);
        [signed_index(u[0], self.n), signed_index(u[1], self.n), signed_index(u[2], self.n)]
    }

    pub fn xi(&self, idx: usize) -> [f64; 3] {
        let u = self.unravel(idx);
        let a = &self.tables.axis;
        [a[u[0]], a[u[1]], a[u[2]]]
    }

    pub fn xi_norm(&self, idx: usize) -> f64 {
        self.tables.norm_sq[idx].sqrt()
    }

    /// Storage index of `-k`, or `None` when `k` lies on a `-n/2` plane.
    pub fn mirror(&self, idx: usize) -> Option<usize> {
        if self.on_nyquist(idx) {
            return None;
        }
        let u = self.unravel(idx);
        let n = self.n;
        Some(self.index((n - u[0]) % n, (n - u[1]) % n, (n - u[2]) % n))
    }

    /// True when any coordinate sits on the unpaired `-n/2` plane.
    pub fn on_nyquist(&self, idx: usize) -> bool {
        let h = self.n / 2;
        self.unravel(idx).contains(&h)
    }

    /// Physical coordinate of point `idx`.
    pub fn x(&self, idx: usize) -> [f64; 3] {
        let u = self.unravel(idx);
        let h = self.dx();
        [u[0] as f64 * h, u[1] as f64 * h, u[2] as f64 * h]
    }

    pub fn check_same(&self, other: &FrequencyGrid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "(n={}, L={}) vs (n={}, L={})",
                self.n, self.length, other.n, other.length
            )))
        }
    }
}

pub(crate) fn signed_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Uniform time samples `0 = t_0 < ... < t_M = T`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t_end: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_end: f64, steps: usize) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::InvalidParameter(format!("final time {t_end} must be positive")));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter("time steps must be >= 1".into()));
        }
        Ok(Self { t_end, steps })
    }

    /// Like [`TimeGrid::new`] but requires an even number of steps, so `T/2` is a sample.
    pub fn new_even(t_end: f64, steps: usize) -> Result<Self> {
        if !steps.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("time steps M = {steps} must be even")));
        }
        Self::new(t_end, steps)
    }

    pub fn dt(&self) -> f64 {
        self.t_end / self.steps as f64
    }

    pub fn samples(&self) -> usize {
        self.steps + 1
    }

    pub fn time(&self, m: usize) -> f64 {
        if m == self.steps {
            self.t_end
        } else {
            m as f64 * self.dt()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.samples()).map(|m| self.time(m)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_spacing_on_two_pi() {
        let g = FrequencyGrid::new(8, 2.0 * PI).unwrap();
        assert_eq!(g.axis_frequencies_sorted(), vec![-4, -3, -2, -1, 0, 1, 2, 3]);
        assert!((g.dxi() - 1.0).abs() < 1e-15);
        assert_eq!(g.xi(0), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn half_period_doubles_spacing() {
        let g = FrequencyGrid::new(16, PI).unwrap();
        assert!((g.dxi() - 2.0).abs() < 1e-15);
        let max = g.axis_wavenumbers().iter().cloned().fold(f64::MIN, f64::max);
        assert!((max - 14.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert_eq!(FrequencyGrid::new(7, 1.0).unwrap_err(), Error::OddGridSize(7));
        assert_eq!(FrequencyGrid::new(6, 1.0).unwrap_err(), Error::GridSizeOutOfRange(6));
        assert_eq!(FrequencyGrid::new(258, 1.0).unwrap_err(), Error::GridSizeOutOfRange(258));
        assert!(matches!(FrequencyGrid::new(8, 0.0), Err(Error::NonPositiveLength(_))));
        assert!(matches!(FrequencyGrid::new(8, -1.0), Err(Error::NonPositiveLength(_))));
    }

    #[test]
    fn mirror_is_involution_off_nyquist() {
        let g = FrequencyGrid::new(8, 1.0).unwrap();
        for idx in 0..g.len() {
            match g.mirror(idx) {
                Some(m) => {
                    assert_eq!(g.mirror(m), Some(idx));
                    let (a, b) = (g.freq_of_index(idx), g.freq_of_index(m));
                    assert_eq!([a[0] + b[0], a[1] + b[1], a[2] + b[2]], [0, 0, 0]);
                }
                None => assert!(g.on_nyquist(idx)),
            }
        }
    }

    #[test]
    fn even_time_grid() {
        assert!(TimeGrid::new_even(1.0, 63).is_err());
        let t = TimeGrid::new_even(1.0, 64).unwrap();
        assert_eq!(t.time(64), 1.0);
        assert_eq!(t.time(32), 0.5);
    }
}
