//! Acceptance criteria 1-12. Runs as a plain binary so every criterion
//! prints one PASS/FAIL line; exits non-zero if any criterion fails.

use std::f64::consts::{E, PI};
use std::time::{Duration, Instant};

use nslab_cli::experiments::signal;
use nslab_cli::{parse_config, run, Experiment};
use nslab_core::majorant::{
    bisect_blowup_amplitude, cheap_evolve, gaussian_spectrum, global_certificate, majorant_picard, CheapParams,
    PicardOptions, Space,
};
use nslab_core::mild::{
    coupled_picard, energy_report, gevrey_verify, kato_solve, nse_bilinear_b, BilinearForm, CoupledOptions,
    CoupledResult, KatoOptions, SolutionTrajectory,
};
use nslab_core::quadrature::ljs_constant;
use nslab_core::random::FieldRng;
use nslab_core::spectral::convolve;
use nslab_core::toolbox::{
    default_radii, domination_slack, gn_exponent, hedberg_verify, maximal_function, splitting_identity_check,
    HedbergOptions,
};
use nslab_core::{FrequencyGrid, MajorantField, PhysicalField, SpectralVectorField, TimeGrid};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn grid(n: usize) -> FrequencyGrid {
    FrequencyGrid::new(n, 2.0 * PI).unwrap()
}

const SUITE: u64 = 20;

struct SuiteRun {
    u0: SpectralVectorField,
    w0: MajorantField,
    result: CoupledResult,
}

/// The seeded small-data suite shared by criteria 1-3.
fn small_data_suite() -> (Vec<SuiteRun>, Duration) {
    let start = Instant::now();
    let g = grid(16);
    let time = TimeGrid::new_even(1.0, 64).unwrap();
    let runs = (0..SUITE)
        .map(|seed| {
            let u0 = FieldRng::new(seed).divergence_free_field(&g, 3, 0.01);
            let w0 = u0.modulus().scale(2.0 * E);
            let result = coupled_picard(&u0, &w0, time, CoupledOptions::default()).expect("suite run");
            SuiteRun { u0, w0, result }
        })
        .collect();
    (runs, start.elapsed())
}

fn criterion_1(suite: &[SuiteRun], elapsed: Duration) -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    for r in suite {
        let d = &r.result.dominance;
        let tol = 1e-10 * d.scale;
        let n = d.value_excess.len().min(10);
        let m = d.increment_excess.len().min(9);
        for e in d.value_excess[..n].iter().chain(&d.increment_excess[..m]) {
            worst = worst.max(e - tol);
        }
    }
    let fast = elapsed < Duration::from_secs(300);
    verdict(
        worst <= 0.0 && fast,
        format!("worst excess over tolerance {worst:.3e}; {SUITE} runs in {:.1} s", elapsed.as_secs_f64()),
    )
}

fn criterion_2(suite: &[SuiteRun]) -> Verdict {
    let time = TimeGrid::new_even(1.0, 64).unwrap();
    let mut worst: f64 = 0.0;
    let mut converged = 0;
    for r in suite {
        let opts = PicardOptions { keep_iterates: true, ..Default::default() };
        let p = match majorant_picard(&r.w0, time, opts) {
            Ok(p) => p,
            Err(e) => return verdict(false, format!("majorant_picard raised {e}")),
        };
        if !p.converged {
            continue;
        }
        converged += 1;
        for pair in p.iterates.windows(2) {
            for (a, b) in pair[0].values.iter().zip(&pair[1].values) {
                for (x, y) in a.values.iter().zip(&b.values) {
                    worst = worst.max(x - y);
                }
            }
        }
    }
    verdict(worst <= 0.0 && converged > 0, format!("{converged} converging runs; max (W[n] - W[n+1]) = {worst:.3e}"))
}

fn criterion_3(suite: &[SuiteRun]) -> Verdict {
    let mut worst = f64::NEG_INFINITY;
    let mut tight: f64 = 0.0;
    for r in suite {
        match gevrey_verify(&r.u0, &r.w0, &r.result) {
            Ok(g) => {
                worst = worst.max(g.max_excess / g.scale);
                tight = tight.max(g.tightest_ratio);
                if !g.pass {
                    return verdict(false, format!("excess {:.3e} relative", g.max_excess / g.scale));
                }
            }
            Err(e) => return verdict(false, e.to_string()),
        }
    }
    verdict(worst <= 1e-10, format!("max excess/scale {worst:.3e}; tightest ratio {tight:.4}"))
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let g = grid(16);
    let time = TimeGrid::new_even(0.5, 8).unwrap();
    let mut worst: f64 = 0.0;
    for seed in 0..3 {
        let mut rng = FieldRng::new(100 + seed);
        let a = SolutionTrajectory::heat(&rng.divergence_free_field(&g, 4, 1.0), time, 1.0).unwrap();
        let b = SolutionTrajectory::heat(&rng.divergence_free_field(&g, 4, 1.0), time, 1.0).unwrap();
        let f = nse_bilinear_b(&a, &b, BilinearForm::FourierKernel, 1.0).unwrap();
        let p = nse_bilinear_b(&a, &b, BilinearForm::PhysicalDuhamel, 1.0).unwrap();
        worst = worst.max(f.max_difference(&p).unwrap() / f.sup_modulus());
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(worst <= 1e-8 && secs < 60.0, format!("max relative difference {worst:.3e} in {secs:.1} s"))
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let g = grid(8);
    let n = 8i64;
    let mut rng = FieldRng::new(5);
    let f = rng.hermitian_scalar(&g, 3, false);
    let h = rng.hermitian_scalar(&g, 3, false);
    let fast = convolve(&f, &h).unwrap();
    let dxi3 = g.dxi3();
    let in_lattice = |k: i64| k > -n / 2 && k < n / 2;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for out in 0..g.len() {
        let k = g.freq_of_index(out);
        if k.iter().any(|v| !in_lattice(*v)) {
            continue;
        }
        let mut s = num_complex::Complex64::new(0.0, 0.0);
        for a in 0..g.len() {
            let ka = g.freq_of_index(a);
            let kb = [k[0] - ka[0], k[1] - ka[1], k[2] - ka[2]];
            if ka.iter().chain(&kb).any(|v| !in_lattice(*v)) {
                continue;
            }
            s += f.coeffs[a] * h.coeffs[g.index_of_freq(kb).unwrap()];
        }
        s *= dxi3;
        scale = scale.max(s.norm());
        worst = worst.max((s - fast.coeffs[out]).norm());
    }
    let rel = worst / scale;
    let secs = start.elapsed().as_secs_f64();
    verdict(rel <= 1e-10 && secs < 30.0, format!("relative difference {rel:.3e} in {secs:.2} s"))
}

fn criterion_6() -> Verdict {
    let values: Vec<f64> = [0.5, 1.0, 2.0, 4.0].iter().map(|&r| ljs_constant(r)).collect();
    let pi3 = PI.powi(3);
    let spread =
        values.iter().cloned().fold(0.0, f64::max) / values.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let near = values.iter().all(|v| (v / pi3 - 1.0).abs() <= 0.01);
    let g = grid(16);
    let time = TimeGrid::new_even(1.0, 64).unwrap();
    let mut threshold = 0.0;
    let mut failures = 0;
    for seed in 0..SUITE {
        let w = FieldRng::new(600 + seed).majorant(&g, 1.0, 2.0);
        let c = global_certificate(&w, Space::LeJanSznitman, 1.0).unwrap();
        threshold = c.threshold;
        // scale to just inside the certified ball
        let w = w.scale(0.9 * c.threshold / c.norm_value);
        let c = global_certificate(&w, Space::LeJanSznitman, 1.0).unwrap();
        let opts = PicardOptions { n_max: 200, ..Default::default() };
        let p = majorant_picard(&w, time, opts).unwrap();
        if !(c.verdict && p.converged) {
            failures += 1;
        }
    }
    let thr_ok = (threshold * 9.0 - 1.0).abs() <= 0.01;
    verdict(
        spread <= 0.01 && near && thr_ok && failures == 0,
        format!(
            "C0/pi^3 = {:?}; spread {spread:.2e}; threshold {threshold:.6}; {failures} of {SUITE} certified runs failed to converge",
            values.iter().map(|v| (v / pi3 * 1e6).round() / 1e6).collect::<Vec<_>>()
        ),
    )
}

fn criterion_7() -> Verdict {
    let g = grid(32);
    let params = CheapParams::new(5.0, 500);
    let profile = |a: f64| gaussian_spectrum(&g, a, 2.0);
    let b = match bisect_blowup_amplitude(profile, params, 1e-3, 10.0, 1.1) {
        Ok(b) => b,
        Err(e) => return verdict(false, e.to_string()),
    };
    let below = cheap_evolve(&profile(b.below), params).unwrap();
    let decays = !below.report.blown_up && below.report.decay_onset() < below.report.growth.len() - 1;
    let amps: Vec<f64> = [1.25, 1.5, 2.0, 3.0, 5.0].iter().map(|m| m * b.above).collect();
    let t_blow: Vec<Option<f64>> =
        amps.iter().map(|&a| cheap_evolve(&profile(a), params).unwrap().report.t_blow).collect();
    let all_blow = t_blow.iter().all(Option::is_some);
    let monotone = t_blow.windows(2).all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b <= a));
    verdict(
        decays && all_blow && monotone,
        format!("A* in [{:.5}, {:.5}]; below decays: {decays}; t_blow above: {t_blow:?}", b.below, b.above),
    )
}

fn criterion_8() -> Verdict {
    let mut rng = FieldRng::new(8);
    let mut worst: f64 = 0.0;
    for &s in &[0.1, 1.0] {
        for _ in 0..50 {
            let f = signal(&mut rng, 32, 5);
            let g = signal(&mut rng, 32, 5);
            worst = worst.max(splitting_identity_check(&f, &g, s).unwrap().residual);
        }
    }
    verdict(worst <= 1e-10, format!("max residual {worst:.3e} over 100 pairs"))
}

/// `M_f` by explicit periodic distances, independent of the library's ball tables.
fn brute_maximal(f: &PhysicalField, radii: &[f64]) -> Vec<f64> {
    let g = &f.grid;
    let n = g.n() as i64;
    let abs = f.abs();
    let pos = |i: usize| g.unravel(i).map(|v| v as i64);
    let wrap = |d: i64| {
        let d = d.rem_euclid(n);
        (if d > n / 2 { n - d } else { d }) as f64 * g.dx()
    };
    (0..g.len())
        .map(|x| {
            let px = pos(x);
            let mut best = abs[x];
            for &r in radii {
                let (mut s, mut c) = (0.0, 0usize);
                for y in 0..g.len() {
                    let py = pos(y);
                    let d = (0..3).map(|k| wrap(px[k] - py[k]).powi(2)).sum::<f64>().sqrt();
                    if d <= r * (1.0 + 1e-12) {
                        s += abs[y];
                        c += 1;
                    }
                }
                best = best.max(s / c as f64);
            }
            best
        })
        .collect()
}

fn slack(n: usize) -> f64 {
    let g = grid(n);
    let t = 0.01;
    let k = move |r: f64| (4.0 * PI * t).powf(-1.5) * (-r * r / (4.0 * t)).exp();
    let f = PhysicalField::from_fn(&g, |x| (x[0].cos() + x[1].cos() + x[2].cos()).exp());
    domination_slack(k, &f, &default_radii(&g)).unwrap().delta
}

fn criterion_9() -> Verdict {
    let g8 = grid(8);
    let radii = default_radii(&g8);
    let mut cell = vec![0.0; g8.len()];
    cell[g8.index(2, 5, 1)] = 1.0;
    let mut brute_err: f64 = 0.0;
    for f in [PhysicalField::from_real(&g8, cell).unwrap(), FieldRng::new(9).band_limited_physical(&g8, 3)] {
        let m = maximal_function(&f, &radii).unwrap();
        let b = brute_maximal(&f, &radii);
        brute_err = brute_err.max(m.values.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    }
    let g = grid(16);
    let radii = default_radii(&g);
    let mut bounds_ok = true;
    for seed in 0..50 {
        let f = FieldRng::new(900 + seed).band_limited_physical(&g, 4);
        let m = maximal_function(&f, &radii).unwrap();
        let abs = f.abs();
        bounds_ok &= m.values.iter().zip(&abs).all(|(v, a)| v >= a);
        bounds_ok &= m.values.iter().cloned().fold(0.0, f64::max) <= f.max_abs();
    }
    let (d16, d32) = (slack(16), slack(32));
    let ratio = d32 / d16;
    let halves = (0.35..=0.65).contains(&ratio);
    verdict(
        brute_err <= 1e-14 && bounds_ok && d32 <= 0.1 && halves,
        format!(
            "brute-force max difference {brute_err:.1e}; bounds on 50 fields: {bounds_ok}; \
             delta_grid n=16 {d16:.3e}, n=32 {d32:.3e}, ratio {ratio:.3e} (need 0.5 +/- 30%)"
        ),
    )
}

fn criterion_10() -> Verdict {
    let law = gn_exponent(1.0, 1.0, 2.0).ok() == Some(4.0) && gn_exponent(2.0, 1.0, 3.0).ok() == Some(9.0);
    let mut constants = Vec::new();
    let mut rec: f64 = 0.0;
    let mut q_ok = true;
    for lam in [1.0, 2.0] {
        for n in [16, 32] {
            let g = grid(n);
            let f = PhysicalField::from_fn(&g, |x| {
                let y = x.map(|v| lam * v);
                y[0].sin() * (2.0 * y[1]).cos() + y[2].cos() * (y[0] + y[1]).sin() + 0.5 * (y[1] - y[2]).cos()
            });
            let r = hedberg_verify(&f, &HedbergOptions::new(1.0, 1.0, 2.0)).unwrap();
            q_ok &= r.q == 4.0;
            rec = rec.max(r.reconstruction_error);
            constants.push(r.pointwise.empirical_constant);
        }
    }
    let spread =
        constants.iter().cloned().fold(0.0, f64::max) / constants.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    verdict(
        law && q_ok && rec <= 1e-6 && spread <= 0.2,
        format!("exponent law {law}; reconstruction {rec:.2e}; constants {constants:.4?} (spread {spread:.3})"),
    )
}

fn criterion_11() -> Verdict {
    let g = grid(16);
    let u0 = FieldRng::new(11).divergence_free_field(&g, 3, 1.0);
    let heat = |m: usize| {
        let opts = KatoOptions { nonlinear: false, ..Default::default() };
        let traj = kato_solve(&u0, TimeGrid::new_even(1.0, m).unwrap(), opts).unwrap();
        energy_report(&traj, 1.0).unwrap().max_abs
    };
    let ratio = heat(256) / heat(512);
    let small = FieldRng::new(12).divergence_free_field(&g, 3, 0.01);
    let traj = kato_solve(&small, TimeGrid::new_even(1.0, 64).unwrap(), KatoOptions::default()).unwrap();
    let d = traj.diagnostics();
    let e0 = d[0].energy.sqrt();
    let sup = d.iter().map(|x| x.energy.sqrt()).fold(0.0, f64::max);
    verdict(
        (3.4..=4.6).contains(&ratio) && sup <= e0 * (1.0 + 1e-8),
        format!("heat residual ratio {ratio:.4}; sup ||u||_2 / ||u0||_2 - 1 = {:.3e}", sup / e0 - 1.0),
    )
}

fn criterion_12() -> Verdict {
    let configs = [
        (Experiment::Picard, "grid.n = 8\ngrid.L = 6.283185307179586\ntime.M = 16\nseed = 3\n"),
        (Experiment::Majorant, "grid.n = 16\ngrid.L = 6.283185307179586\nseed = 4\n"),
        (Experiment::Calderon, "grid.n = 16\ngrid.L = 6.283185307179586\nseed = 5\n"),
        (Experiment::Splitting, "grid.n = 8\ngrid.L = 6.283185307179586\nseed = 6\noutput.format = csv\n"),
        (Experiment::CheapEvolve, "grid.n = 16\ngrid.L = 6.283185307179586\nseed = 7\noutput.format = csv\n"),
    ];
    let tmp = tempfile::tempdir().unwrap();
    let mut mismatches = Vec::new();
    let mut files = 0;
    for (exp, text) in configs {
        let digests: Vec<Vec<(String, String)>> = [1, 8, 8]
            .iter()
            .enumerate()
            .map(|(i, threads)| {
                let cfg = parse_config(&format!("{text}threads = {threads}\n")).unwrap();
                let dir = tmp.path().join(format!("{}-{i}", exp.id()));
                let m = run(exp, &cfg, &dir).unwrap();
                m.files.into_iter().map(|f| (f.name, f.sha256)).collect()
            })
            .collect();
        files += digests[0].len();
        if digests[0] != digests[1] || digests[1] != digests[2] {
            mismatches.push(exp.id());
        }
    }
    verdict(mismatches.is_empty(), format!("{files} files compared at 1/8/8 threads; mismatches {mismatches:?}"))
}

fn main() {
    let (suite, elapsed) = small_data_suite();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict + '_>)> = vec![
        ("dominance suite", Box::new(|| criterion_1(&suite, elapsed))),
        ("monotone majorant", Box::new(|| criterion_2(&suite))),
        ("Gevrey inequality", Box::new(|| criterion_3(&suite))),
        ("dual-form bilinear agreement", Box::new(criterion_4)),
        ("convolution oracle", Box::new(criterion_5)),
        ("Le Jan-Sznitman constant", Box::new(criterion_6)),
        ("blow-up phenomenology", Box::new(criterion_7)),
        ("splitting identity", Box::new(criterion_8)),
        ("maximal function", Box::new(criterion_9)),
        ("Hedberg / Gagliardo-Nirenberg", Box::new(criterion_10)),
        ("energy accounting", Box::new(criterion_11)),
        ("determinism", Box::new(criterion_12)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name} ({:.1} s): {}", i + 1, start.elapsed().as_secs_f64(), v.detail);
        if !v.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
