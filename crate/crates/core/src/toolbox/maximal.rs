use serde::Serialize;

use super::offset_distance;
use crate::error::{Error, Result};
use crate::field::PhysicalField;
use crate::grid::FrequencyGrid;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximalField {
    #[serde(skip)]
    pub grid: Option<FrequencyGrid>,
    pub values: Vec<f64>,
    pub radii: Vec<f64>,
}

/// Geometric ladder with ratio `sqrt 2` from one cell width to `L/4`.
pub fn default_radii(grid: &FrequencyGrid) -> Vec<f64> {
    let mut r = grid.dx();
    let mut out = Vec::new();
    while r <= 0.25 * grid.length() * (1.0 + 1e-12) {
        out.push(r);
        r *= std::f64::consts::SQRT_2;
    }
    out
}

/// Lattice offsets (one representative per point of the torus) within
/// periodic distance `r`.
fn ball(grid: &FrequencyGrid, r: f64) -> Vec<[isize; 3]> {
    let n = grid.n() as isize;
    (0..grid.len())
        .filter(|&i| offset_distance(grid, i) <= r * (1.0 + 1e-12))
        .map(|i| grid.unravel(i).map(|a| if (a as isize) < n / 2 { a as isize } else { a as isize - n }))
        .collect()
}

/// `M_f(x) = max(|f(x)|, max_r avg_{B(x,r)} |f|)` over the listed radii,
/// by direct summation over periodic lattice balls.
pub fn maximal_function(f: &PhysicalField, radii: &[f64]) -> Result<MaximalField> {
    let grid = &f.grid;
    let half = 0.5 * grid.length();
    for w in radii.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidParameter("radii must be strictly increasing".into()));
        }
    }
    for &r in radii {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter(format!("radius {r}")));
        }
        if r > half {
            return Err(Error::RadiusTooLarge { radius: r, half });
        }
    }
    let n = grid.n() as isize;
    let abs = f.abs();
    let mut values = abs.clone();
    for &r in radii {
        let offs = ball(grid, r);
        let inv = 1.0 / offs.len() as f64;
        for (x, v) in values.iter_mut().enumerate() {
            let [a, b, c] = grid.unravel(x).map(|i| i as isize);
            let mut s = 0.0;
            for o in &offs {
                let i = (a + o[0]).rem_euclid(n) as usize;
                let j = (b + o[1]).rem_euclid(n) as usize;
                let k = (c + o[2]).rem_euclid(n) as usize;
                s += abs[grid.index(i, j, k)];
            }
            *v = v.max(s * inv);
        }
    }
    Ok(MaximalField { grid: Some(grid.clone()), values, radii: radii.to_vec() })
}
