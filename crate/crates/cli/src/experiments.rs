//! Dispatch from experiment id to the library operations.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use nslab_core::majorant::{
    cheap_evolve, gaussian_spectrum, global_certificate, local_certificate, majorant_picard, CheapParams, LocalSpace,
    PicardOptions, Space,
};
use nslab_core::mild::{
    coupled_picard, energy_report, gevrey_verify, kato_solve, BilinearForm, CoupledOptions, KatoOptions,
};
use nslab_core::norms::{norms, HerzIndex, NormInput, NormParams, ThermicParams};
use nslab_core::quadrature::{constant_table, DerivedConstant, Provenance};
use nslab_core::random::FieldRng;
use nslab_core::snapshot::{encode, Snapshot};
use nslab_core::toolbox::{
    calderon_bisect, calderon_cheap_solve, default_c2, default_radii, domination_slack, hedberg_verify,
    maximal_function, radial_domination_check, splitting_identity_check, CalderonOptions, CalderonStatus,
    HedbergOptions, KernelId,
};
use nslab_core::{FrequencyGrid, PhysicalField, TimeGrid};
use num_complex::Complex64;
use serde_json::{json, Value as Json};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;
use crate::report::{emit_report, Artifact, Table};

/// Everything an experiment hands back to the runner.
#[derive(Debug, Default)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub constants: Vec<DerivedConstant>,
    pub tolerances: BTreeMap<String, f64>,
    /// Set when a verified property failed; outputs are still written.
    pub failure: Option<String>,
}

impl Outcome {
    fn report(&mut self, stem: &str, summary: Json, table: Option<&Table>, cfg: &ExperimentConfig) {
        self.artifacts.extend(emit_report(stem, summary, table, cfg.format));
    }

    fn snapshot(&mut self, name: &str, s: &Snapshot) {
        self.artifacts.push(Artifact { name: name.into(), bytes: encode(s) });
    }

    fn tol(&mut self, name: &str, v: f64) {
        self.tolerances.insert(name.into(), v);
    }
}

fn opt(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

pub fn run_experiment(exp: Experiment, cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let grid = FrequencyGrid::new(cfg.n, cfg.length)?;
    let time = TimeGrid::new_even(cfg.t_end, cfg.steps)?;
    let mut rng = FieldRng::new(cfg.seed);
    let mut out = Outcome::default();
    match exp {
        Experiment::GridInfo => grid_info(&grid, time, cfg, &mut out),
        Experiment::Norms => {
            let u = rng.divergence_free_field(&grid, kmax(cfg), cfg.float("amplitude", 1.0));
            let herz = match cfg.list("herz") {
                Some(h) => vec![HerzIndex::new(h[0], h[1], h[2])?],
                None => Vec::new(),
            };
            let mut thermic = ThermicParams::new(cfg.float("t_max", cfg.t_end));
            thermic.nu = cfg.nu;
            let r = norms(NormInput::Vector(&u), &NormParams { herz, thermic: Some(thermic) })?;
            let mut t = Table::new(&["sobolev_half", "lejan", "leilin", "energy_l2", "thermic_kato"]);
            t.push(vec![
                opt(r.sobolev_half),
                opt(r.lejan),
                opt(r.leilin),
                opt(r.energy_l2),
                opt(r.thermic_kato.map(|v| v.value)),
            ]);
            out.report("norms", json!(r), Some(&t), cfg);
            out.snapshot("norms_input.fns1", &Snapshot::Vector(u));
        }
        Experiment::Majorant => {
            let w0 = rng.majorant(&grid, cfg.float("amplitude", 0.05), cfg.float("width", 2.0));
            let opts = PicardOptions {
                n_max: cfg.int("n_max", 30) as usize,
                tol: cfg.float("tol", 1e-12),
                nu: cfg.nu,
                keep_iterates: false,
            };
            out.tol("picard_tol", opts.tol);
            let r = majorant_picard(&w0, time, opts)?;
            let mut t = Table::new(&["iteration", "sup_increment"]);
            for (i, s) in r.sup_increments.iter().enumerate() {
                t.push(vec![(i + 1) as f64, *s]);
            }
            let summary = json!({
                "converged": r.converged,
                "diverged": r.diverged,
                "iterations": r.iterations(),
                "sup": r.trajectory.sup(),
                "clamp": r.clamp,
                "options": opts,
            });
            out.report("majorant", summary, Some(&t), cfg);
            let last = r.trajectory.values.last().expect("nonempty trajectory").clone();
            out.snapshot("majorant_final.fns1", &Snapshot::Majorant(last));
            if !r.converged {
                out.failure = Some(format!("majorant Picard iteration did not converge (diverged = {})", r.diverged));
            }
        }
        Experiment::CheapEvolve => {
            let w0 = gaussian_spectrum(&grid, cfg.float("amplitude", 0.1), cfg.float("width", 2.0));
            let mut p = CheapParams::new(cfg.t_end, cfg.int("steps", cfg.steps as i64) as usize);
            p.nu = cfg.nu;
            out.tol("blowup_factor", p.blowup_factor);
            let r = cheap_evolve(&w0, p)?;
            let mut t = Table::new(&["t", "sup_spectrum", "lejan", "sobolev_half", "leilin"]);
            for s in &r.series {
                t.push(vec![s.t, s.sup_spectrum, s.lejan, s.sobolev_half, s.leilin]);
            }
            let summary = json!({
                "blown_up": r.report.blown_up,
                "t_blow": r.report.t_blow,
                "decay_onset": r.report.decay_onset(),
                "clamp": r.clamp,
                "params": p,
            });
            out.report("cheap_evolve", summary, Some(&t), cfg);
        }
        Experiment::Certificate => {
            let w0 = rng.majorant(&grid, cfg.float("amplitude", 0.05), cfg.float("width", 2.0));
            let name = cfg.string("space").unwrap_or("lejan_sznitman");
            let c = match name {
                "fujita_kato" => global_certificate(&w0, Space::FujitaKato, cfg.nu)?,
                "lejan_sznitman" => global_certificate(&w0, Space::LeJanSznitman, cfg.nu)?,
                "lei_lin" => global_certificate(&w0, Space::LeiLin, cfg.nu)?,
                "herz" => {
                    let h = cfg.list("herz").expect("validated");
                    global_certificate(&w0, Space::Herz(HerzIndex::new(h[0], h[1], h[2])?), cfg.nu)?
                }
                local => {
                    let space = if local == "fujita_kato_local" {
                        LocalSpace::FujitaKatoLocal
                    } else {
                        LocalSpace::LeJanSznitmanLocal
                    };
                    local_certificate(&w0, cfg.float("local_T", cfg.t_end), space, cfg.nu)?
                }
            };
            out.constants.extend(c.constants_used.iter().cloned());
            let mut t = Table::new(&["norm_value", "threshold", "margin", "verdict"]);
            t.push(vec![c.norm_value, c.threshold, c.margin, if c.verdict { 1.0 } else { 0.0 }]);
            out.report("certificate", json!(c), Some(&t), cfg);
        }
        Experiment::Picard | Experiment::GevreyCheck => {
            let u0 = rng.divergence_free_field(&grid, kmax(cfg), cfg.float("amplitude", 0.01));
            let w0 = u0.modulus().scale(cfg.float("w_factor", 2.0 * E));
            let opts = CoupledOptions {
                n_max: cfg.int("n_max", 40) as usize,
                tol: cfg.float("tol", 1e-12),
                nu: cfg.nu,
                form: form(cfg, BilinearForm::FourierKernel),
            };
            out.tol("picard_tol", opts.tol);
            out.tol("dominance_tol", nslab_core::mild::DOMINANCE_TOL);
            let r = coupled_picard(&u0, &w0, time, opts)?;
            let table = diagnostics_table(&r.solution.diagnostics());
            if exp == Experiment::Picard {
                let summary = json!({
                    "status": r.status,
                    "iterations": r.increments.len(),
                    "increments": r.increments,
                    "dominance": r.dominance,
                    "clamp": r.clamp,
                    "options": opts,
                });
                out.report("picard", summary, Some(&table), cfg);
                out.snapshot(
                    "picard_u_final.fns1",
                    &Snapshot::Vector(r.solution.fields.last().expect("samples").clone()),
                );
                out.snapshot(
                    "picard_w_final.fns1",
                    &Snapshot::Majorant(r.majorant.values.last().expect("samples").clone()),
                );
                if !r.dominance.pass {
                    out.failure = Some("dominance violated".into());
                } else if r.status != nslab_core::mild::PicardStatus::Converged {
                    out.failure = Some(format!("coupled Picard iteration ended as {:?}", r.status));
                }
            } else {
                let g = gevrey_verify(&u0, &w0, &r)?;
                out.report("gevrey", json!({ "report": g, "picard_status": r.status }), Some(&table), cfg);
                if !g.pass {
                    out.failure = Some(format!("Gevrey inequality violated (max excess {:e})", g.max_excess));
                }
            }
        }
        Experiment::Kato => {
            let u0 = rng.divergence_free_field(&grid, kmax(cfg), cfg.float("amplitude", 0.01));
            let opts = KatoOptions {
                nu: cfg.nu,
                nonlinear: cfg.boolean("nonlinear", true),
                form: form(cfg, BilinearForm::PhysicalDuhamel),
                ..Default::default()
            };
            out.tol("inner_tol", opts.inner_tol);
            let traj = kato_solve(&u0, time, opts)?;
            let energy = energy_report(&traj, cfg.nu)?;
            let diag = traj.diagnostics();
            let e0 = diag[0].energy.sqrt();
            let sup_l2 = diag.iter().map(|d| d.energy.sqrt()).fold(0.0, f64::max);
            let summary = json!({
                "options": opts,
                "energy": energy,
                "l2_initial": e0,
                "l2_sup": sup_l2,
                "l2_growth": if e0 > 0.0 { sup_l2 / e0 - 1.0 } else { 0.0 },
            });
            out.report("kato", summary, Some(&diagnostics_table(&diag)), cfg);
            out.snapshot("kato_u_final.fns1", &Snapshot::Vector(traj.fields.last().expect("samples").clone()));
        }
        Experiment::Maximal => {
            let f = rng.band_limited_physical(&grid, kmax(cfg));
            let radii = cfg.list("radii").map(<[f64]>::to_vec).unwrap_or_else(|| default_radii(&grid));
            let m = maximal_function(&f, &radii)?;
            let abs = f.abs();
            let mut t = Table::new(&["index", "abs_f", "maximal"]);
            for (i, (a, v)) in abs.iter().zip(&m.values).enumerate() {
                t.push(vec![i as f64, *a, *v]);
            }
            let heat_t = cfg.list("t_list").map_or(0.1, |l| l[0]);
            let kernel = move |r: f64| (4.0 * PI * heat_t).powf(-1.5) * (-r * r / (4.0 * heat_t)).exp();
            let slack = domination_slack(kernel, &f, &radii)?;
            let min_gap = abs.iter().zip(&m.values).map(|(a, v)| v - a).fold(f64::INFINITY, f64::min);
            let summary = json!({
                "radii": radii,
                "sup_f": f.max_abs(),
                "sup_maximal": m.values.iter().cloned().fold(0.0, f64::max),
                "min_maximal_minus_abs": min_gap,
                "heat_slack": slack,
                "heat_t": heat_t,
            });
            out.report("maximal", summary, Some(&t), cfg);
        }
        Experiment::Hedberg => {
            let f = rng.band_limited_physical(&grid, kmax(cfg));
            let mut opts = HedbergOptions::new(cfg.float("alpha", 1.0), cfg.float("beta", 1.0), cfg.float("p", 2.0));
            opts.t_max = cfg.float("t_max", opts.t_max);
            opts.radii = cfg.list("radii").map(<[f64]>::to_vec);
            let r = hedberg_verify(&f, &opts)?;
            out.tol("reconstruction", 1e-6);
            let mut t = Table::new(&["q", "pointwise_constant", "gn_ratio", "reconstruction_error"]);
            t.push(vec![r.q, r.pointwise.empirical_constant, r.gn_ratio, r.reconstruction_error]);
            out.report("hedberg", json!({ "options": opts, "report": r }), Some(&t), cfg);
            if r.reconstruction_error > 1e-6 {
                out.failure = Some(format!("reconstruction error {:e} above 1e-6", r.reconstruction_error));
            }
        }
        Experiment::Calderon => calderon(&grid, cfg, &mut rng, &mut out)?,
        Experiment::Splitting => {
            let len = cfg.int("length", 32) as usize;
            let samples = cfg.int("samples", 50) as usize;
            let s_list = cfg.list("s").map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.1, 1.0]);
            let band = (len / 6) as i64;
            out.tol("splitting_residual", 1e-10);
            let mut t = Table::new(&["s", "sample", "residual", "lhs_max", "amplification"]);
            let mut worst: f64 = 0.0;
            for &s in &s_list {
                for k in 0..samples {
                    let f = signal(&mut rng, len, band);
                    let g = signal(&mut rng, len, band);
                    let r = splitting_identity_check(&f, &g, s)?;
                    worst = worst.max(r.residual);
                    t.push(vec![s, k as f64, r.residual, r.lhs_max, r.amplification]);
                }
            }
            let pass = worst <= 1e-10;
            out.report(
                "splitting",
                json!({ "length": len, "band": band, "max_residual": worst, "pass": pass }),
                Some(&t),
                cfg,
            );
            if !pass {
                out.failure = Some(format!("splitting residual {worst:e} above 1e-10"));
            }
        }
    }
    Ok(out)
}

fn kmax(cfg: &ExperimentConfig) -> i64 {
    cfg.int("kmax", 3.min(cfg.n as i64 / 2 - 1))
}

fn form(cfg: &ExperimentConfig, default: BilinearForm) -> BilinearForm {
    match cfg.string("form") {
        Some("fourier_kernel") => BilinearForm::FourierKernel,
        Some("physical_duhamel") => BilinearForm::PhysicalDuhamel,
        _ => default,
    }
}

fn diagnostics_table(d: &[nslab_core::mild::Diagnostics]) -> Table {
    let mut t = Table::new(&["t", "energy", "enstrophy", "kato_seminorm", "gevrey_radius"]);
    for x in d {
        t.push(vec![x.t, x.energy, x.enstrophy, x.kato_seminorm, opt(x.gevrey_radius)]);
    }
    t
}

/// Random 1D signal `sum_{|k| <= band} c_k e^{i k x_j}`, normalized to max modulus 1.
pub fn signal(rng: &mut FieldRng, len: usize, band: i64) -> Vec<Complex64> {
    let c: Vec<(i64, Complex64)> = (-band..=band).map(|k| (k, Complex64::new(rng.normal(), rng.normal()))).collect();
    let v: Vec<Complex64> = (0..len)
        .map(|j| {
            c.iter().map(|(k, a)| a * Complex64::from_polar(1.0, 2.0 * PI * (k * j as i64) as f64 / len as f64)).sum()
        })
        .collect();
    let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    v.into_iter().map(|z| z / m).collect()
}

fn grid_info(grid: &FrequencyGrid, time: TimeGrid, cfg: &ExperimentConfig, out: &mut Outcome) {
    let mut t = Table::new(&["n", "L", "dx", "dxi", "modes", "T", "M", "dt"]);
    t.push(vec![
        grid.n() as f64,
        grid.length(),
        grid.dx(),
        grid.dxi(),
        grid.len() as f64,
        cfg.t_end,
        cfg.steps as f64,
        time.dt(),
    ]);
    let summary = json!({
        "n": grid.n(),
        "L": grid.length(),
        "dx": grid.dx(),
        "dxi": grid.dxi(),
        "modes": grid.len(),
        "max_frequency": grid.n() / 2 - 1,
        "time": { "T": cfg.t_end, "M": cfg.steps, "dt": time.dt() },
    });
    out.report("grid_info", summary, Some(&t), cfg);
}

fn calderon(
    grid: &FrequencyGrid,
    cfg: &ExperimentConfig,
    rng: &mut FieldRng,
    out: &mut Outcome,
) -> Result<(), CliError> {
    let alpha = cfg.float("alpha", 0.5);
    let mut opts = CalderonOptions { alpha, c2: default_c2(alpha), ..Default::default() };
    out.constants.push(match cfg.params.get("c2") {
        Some(_) => {
            opts.c2 = cfg.float("c2", opts.c2);
            DerivedConstant::new("calderon_c2", opts.c2, Provenance::UserSupplied, "C''")
        }
        None => DerivedConstant::new("calderon_c2", opts.c2, Provenance::ClosedForm, "2/((4-alpha)(3-alpha) c_alpha)"),
    });
    opts.tol = cfg.float("tol", opts.tol);
    out.tol("calderon_tol", opts.tol);
    let width = cfg.float("width", 0.7);
    let c = 0.5 * grid.length();
    let bump = |a: f64| {
        PhysicalField::from_fn(grid, |x| {
            let r2: f64 = x.iter().map(|v| (v - c).powi(2)).sum();
            a * (-r2 / (2.0 * width * width)).exp()
        })
    };
    let r = calderon_cheap_solve(&bump(cfg.float("amplitude", 0.01)), opts)?;
    let bisection = match (cfg.params.get("lo"), cfg.params.get("hi")) {
        (Some(_), Some(_)) => {
            let (lo, hi) = (cfg.float("lo", 0.0), cfg.float("hi", 0.0));
            Some(calderon_bisect(bump, opts, lo, hi, cfg.float("ratio", 1.05))?)
        }
        _ => None,
    };
    let kernels: Vec<KernelId> = match cfg.string("kernel") {
        None | Some("all") => KernelId::ALL.to_vec(),
        Some(k) => vec![k.parse()?],
    };
    let t_list = cfg.list("t_list").map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.05, 0.1, 0.2, 0.4]);
    let f = rng.band_limited_physical(grid, kmax(cfg));
    let checks =
        kernels.iter().map(|k| radial_domination_check(*k, &f, &t_list, 0.2)).collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["iteration", "increment"]);
    for (i, inc) in r.increments.iter().enumerate() {
        t.push(vec![(i + 1) as f64, *inc]);
    }
    let summary = json!({
        "options": opts,
        "result": r,
        "bisection": bisection.map(|(below, above)| json!({ "below": below, "above": above })),
        "kernel_bounds": checks,
    });
    out.report("calderon", summary, Some(&t), cfg);
    out.snapshot("calderon_solution.fns1", &Snapshot::Physical(PhysicalField::from_real(grid, r.solution.clone())?));
    if r.status != CalderonStatus::Converged {
        out.failure = Some("cheap Calderón iteration diverged".into());
    }
    Ok(())
}

/// Constants reported in every manifest.
pub fn base_constants() -> Vec<DerivedConstant> {
    constant_table()
}
