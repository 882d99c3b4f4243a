use std::f64::consts::PI;

use nslab_core::majorant::{cheap_bilinear_b0, MajorantTrajectory};
use nslab_core::random::FieldRng;
use nslab_core::spectral::{convolve_majorants, heat_semigroup, leray_project};
use nslab_core::toolbox::{default_radii, maximal_function, reconstruction_error, splitting_identity_check};
use nslab_core::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn grid(n: usize) -> FrequencyGrid {
    FrequencyGrid::new(n, 2.0 * PI).unwrap()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn physical_round_trip(seed in any::<u64>()) {
        let g = grid(8);
        let f = FieldRng::new(seed).hermitian_scalar(&g, 3, false);
        let back = SpectralScalar::from_physical(&f.to_physical());
        prop_assert!(max_diff(&back.coeffs, &f.coeffs) <= 1e-12 * f.max_modulus());
        prop_assert!(f.to_physical().max_imag() <= 1e-12 * f.to_physical().max_abs());
    }

    #[test]
    fn leray_idempotent(seed in any::<u64>()) {
        let g = grid(8);
        let mut rng = FieldRng::new(seed);
        let comps = [0, 1, 2].map(|_| rng.hermitian_scalar(&g, 3, false).coeffs);
        let v = SpectralVectorField::new(&g, comps).unwrap();
        let p = leray_project(&v);
        let pp = leray_project(&p);
        prop_assert!(p.is_divergence_free());
        for d in 0..3 {
            prop_assert!(max_diff(&p.comps[d], &pp.comps[d]) <= 1e-13 * v.max_modulus());
        }
    }

    #[test]
    fn heat_semigroup_law(seed in any::<u64>(), t in 0.0..1.0f64, s in 0.0..1.0f64) {
        let g = grid(8);
        let f = FieldRng::new(seed).hermitian_scalar(&g, 3, false);
        let a = heat_semigroup(&heat_semigroup(&f, t, 1.0).unwrap(), s, 1.0).unwrap();
        let b = heat_semigroup(&f, t + s, 1.0).unwrap();
        prop_assert!(max_diff(&a.coeffs, &b.coeffs) <= 1e-13 * f.max_modulus());
    }

    #[test]
    fn convolution_comparison(seed in any::<u64>(), extra in 0.0..2.0f64) {
        let g = grid(8);
        let mut rng = FieldRng::new(seed);
        let w = rng.majorant(&g, 1.0, 2.0);
        let v = rng.majorant(&g, 1.0, 2.0);
        let bigger = MajorantField::new(&g, w.values.iter().map(|x| x * (1.0 + extra)).collect()).unwrap();
        let (a, _) = convolve_majorants(&w, &v).unwrap();
        let (b, _) = convolve_majorants(&bigger, &v).unwrap();
        let (c, _) = convolve_majorants(&v, &w).unwrap();
        let tol = 1e-13 * b.max();
        prop_assert!(a.dominated_by(&b, tol));
        prop_assert!(a.values.iter().zip(&c.values).all(|(x, y)| (x - y).abs() <= tol));
    }

    #[test]
    fn b0_monotone(seed in any::<u64>()) {
        let g = grid(8);
        let mut rng = FieldRng::new(seed);
        let w0 = rng.majorant(&g, 0.5, 2.0);
        let w1 = MajorantField::new(&g, w0.values.iter().map(|x| 1.5 * x).collect()).unwrap();
        let time = TimeGrid::new_even(0.5, 8).unwrap();
        let a = MajorantTrajectory::heat(&w0, time, 1.0);
        let b = MajorantTrajectory::heat(&w1, time, 1.0);
        let (ba, _) = cheap_bilinear_b0(&a, &a, 1.0).unwrap();
        let (bb, _) = cheap_bilinear_b0(&b, &b, 1.0).unwrap();
        prop_assert!(ba.max_excess_over(&bb) <= 1e-13 * bb.sup());
    }

    #[test]
    fn maximal_sublinear(seed in any::<u64>(), c in -3.0..3.0f64) {
        let g = grid(8);
        let mut rng = FieldRng::new(seed);
        let f = rng.band_limited_physical(&g, 2);
        let h = rng.band_limited_physical(&g, 2);
        let radii = default_radii(&g);
        let sum = PhysicalField::from_real(&g, f.real().iter().zip(h.real()).map(|(a, b)| a + b).collect()).unwrap();
        let scaled = PhysicalField::from_real(&g, f.real().iter().map(|a| c * a).collect()).unwrap();
        let (mf, mh) = (maximal_function(&f, &radii).unwrap(), maximal_function(&h, &radii).unwrap());
        let ms = maximal_function(&sum, &radii).unwrap();
        let mc = maximal_function(&scaled, &radii).unwrap();
        for i in 0..g.len() {
            prop_assert!(ms.values[i] <= mf.values[i] + mh.values[i] + 1e-13);
            prop_assert!((mc.values[i] - c.abs() * mf.values[i]).abs() <= 1e-13);
            prop_assert!(mf.values[i] >= f.abs()[i]);
            prop_assert!(mf.values[i] <= f.max_abs() + 1e-15);
        }
    }

    #[test]
    fn splitting_identity_random(seed in any::<u64>(), s in 0.05..1.0f64) {
        let n = 32;
        let mut rng = FieldRng::new(seed);
        let mut signal = || -> Vec<Complex64> {
            let c: Vec<(i64, Complex64)> = (-5..=5).map(|k| (k, Complex64::new(rng.normal(), rng.normal()))).collect();
            (0..n)
                .map(|j| c.iter().map(|(k, a)| a * Complex64::from_polar(1.0, 2.0 * PI * (*k * j as i64) as f64 / n as f64)).sum())
                .collect()
        };
        let (f, g) = (signal(), signal());
        let r = splitting_identity_check(&f, &g, s).unwrap();
        prop_assert!(r.residual <= 1e-10 * r.lhs_max.max(1.0));
    }
}

#[test]
fn reconstruction_identity_band_limited() {
    let g = grid(16);
    let f = FieldRng::new(7).band_limited_physical(&g, 4);
    assert!(reconstruction_error(&f, 2, 1e-6, 1e3, 64) <= 1e-6);
}

#[test]
fn odd_grid_rejected() {
    assert!(matches!(FrequencyGrid::new(7, 1.0), Err(Error::OddGridSize(7))));
}
