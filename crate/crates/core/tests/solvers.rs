use std::f64::consts::{E, PI};

use nslab_core::majorant::{majorant_picard, PicardOptions};
use nslab_core::mild::{coupled_picard, gevrey_verify, kato_solve, CoupledOptions, KatoOptions, PicardStatus};
use nslab_core::random::FieldRng;
use nslab_core::*;

#[test]
fn coupled_and_marching_solutions_agree() {
    let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
    let time = TimeGrid::new_even(0.5, 16).unwrap();
    let u0 = FieldRng::new(1).divergence_free_field(&grid, 2, 0.01);
    let w0 = u0.modulus().scale(2.0 * E);
    let r = coupled_picard(&u0, &w0, time, CoupledOptions::default()).unwrap();
    assert_eq!(r.status, PicardStatus::Converged);
    assert!(r.dominance.pass);
    assert!(gevrey_verify(&u0, &w0, &r).unwrap().pass);
    let k = kato_solve(&u0, time, KatoOptions::default()).unwrap();
    assert!(k.max_difference(&r.solution).unwrap() <= 1e-10 * r.solution.sup_modulus());
}

#[test]
fn undominated_data_rejected() {
    let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
    let time = TimeGrid::new_even(0.5, 4).unwrap();
    let u0 = FieldRng::new(2).divergence_free_field(&grid, 2, 0.01);
    let w0 = u0.modulus().scale(0.5);
    assert!(matches!(
        coupled_picard(&u0, &w0, time, CoupledOptions::default()),
        Err(Error::InitialDominationViolated(_))
    ));
}

#[test]
fn large_majorant_diverges() {
    let grid = FrequencyGrid::new(8, 2.0 * PI).unwrap();
    let time = TimeGrid::new_even(1.0, 16).unwrap();
    let w0 = FieldRng::new(3).majorant(&grid, 50.0, 2.0);
    let r = majorant_picard(&w0, time, PicardOptions::default()).unwrap();
    assert!(r.diverged && !r.converged);
}
