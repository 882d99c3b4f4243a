//! Unnormalized 3D and 1D complex FFTs on cubic row-major arrays.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `sum_j a_j e^{-2 pi i k j / m}`
    Forward,
    /// `sum_k a_k e^{+2 pi i k j / m}` (no 1/m factor)
    Inverse,
}

thread_local! {
    static PLANS: RefCell<HashMap<(usize, bool), Arc<dyn Fft<f64>>>> = RefCell::new(HashMap::new());
}

fn plan(m: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    let fwd = dir == Direction::Forward;
    PLANS.with(|cache| {
        cache
            .borrow_mut()
            .entry((m, fwd))
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                if fwd {
                    planner.plan_fft_forward(m)
                } else {
                    planner.plan_fft_inverse(m)
                }
            })
            .clone()
    })
}

/// In-place 3D transform of an `m^3` array.
pub fn fft3(data: &mut [Complex64], m: usize, dir: Direction) {
    assert_eq!(data.len(), m * m * m);
    let fft = plan(m, dir);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    // last axis is contiguous
    fft.process_with_scratch(data, &mut scratch);

    let mut buf = vec![Complex64::new(0.0, 0.0); data.len()];
    // middle axis
    for a in 0..m {
        for c in 0..m {
            let line = (a * m + c) * m;
            for b in 0..m {
                buf[line + b] = data[(a * m + b) * m + c];
            }
        }
    }
    fft.process_with_scratch(&mut buf, &mut scratch);
    for a in 0..m {
        for c in 0..m {
            let line = (a * m + c) * m;
            for b in 0..m {
                data[(a * m + b) * m + c] = buf[line + b];
            }
        }
    }
    // first axis
    for b in 0..m {
        for c in 0..m {
            let line = (b * m + c) * m;
            for a in 0..m {
                buf[line + a] = data[(a * m + b) * m + c];
            }
        }
    }
    fft.process_with_scratch(&mut buf, &mut scratch);
    for b in 0..m {
        for c in 0..m {
            let line = (b * m + c) * m;
            for a in 0..m {
                data[(a * m + b) * m + c] = buf[line + a];
            }
        }
    }
}

/// In-place 1D transform.
pub fn fft1(data: &mut [Complex64], dir: Direction) {
    let fft = plan(data.len(), dir);
    fft.process(data);
}

/// Copy an `n^3` lattice array into an `m^3` array (`m >= n`), keeping each
/// signed frequency at the same signed position modulo `m`; other entries are zero.
pub fn pad(src: &[Complex64], n: usize, m: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m * m * m];
    let map: Vec<usize> = (0..n).map(|i| wrap(i, n, m)).collect();
    for a in 0..n {
        for b in 0..n {
            let s = (a * n + b) * n;
            let d = (map[a] * m + map[b]) * m;
            for c in 0..n {
                out[d + map[c]] = src[s + c];
            }
        }
    }
    out
}

/// Inverse of [`pad`]: read back the retained `n^3` lattice.
pub fn truncate(src: &[Complex64], m: usize, n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n * n];
    let map: Vec<usize> = (0..n).map(|i| wrap(i, n, m)).collect();
    for a in 0..n {
        for b in 0..n {
            let d = (a * n + b) * n;
            let s = (map[a] * m + map[b]) * m;
            for c in 0..n {
                out[d + c] = src[s + map[c]];
            }
        }
    }
    out
}

fn wrap(i: usize, n: usize, m: usize) -> usize {
    if i < n / 2 {
        i
    } else {
        m - (n - i)
    }
}

/// Padded size for exact retained-mode products of two lattice arrays.
pub fn padded_size(n: usize) -> usize {
    3 * n / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_then_inverse_scales_by_volume() {
        let m = 6;
        let orig: Vec<Complex64> =
            (0..m * m * m).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut d = orig.clone();
        fft3(&mut d, m, Direction::Forward);
        fft3(&mut d, m, Direction::Inverse);
        let s = (m * m * m) as f64;
        for (a, b) in d.iter().zip(&orig) {
            assert!((a / s - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pad_truncate_roundtrip() {
        let n = 8;
        let orig: Vec<Complex64> = (0..n * n * n).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        let p = pad(&orig, n, 12);
        assert_eq!(truncate(&p, 12, n), orig);
    }
}
