//! Adaptive quadrature and the derived constant table.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::gamma::gamma;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One 7/15-point Gauss–Kronrod panel: (kronrod estimate, error estimate).
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let s = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive Gauss–Kronrod on a finite interval.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol * |I|)`
/// or after `max_panels` panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    let max_panels = 4000;
    let (v, e) = gk15(&f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) || panels.len() >= max_panels {
            return total;
        }
        let worst = panels.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).map(|(i, _)| i).unwrap();
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return total;
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}

/// Which endpoint carries an integrable singularity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Singular {
    Left,
    Right,
}

/// Integrate with the quadratic map `x = a + (b-a) s^2` (or its mirror)
/// clustering nodes at the singular endpoint.
pub fn integrate_singular(f: impl Fn(f64) -> f64, a: f64, b: f64, at: Singular, rel_tol: f64) -> f64 {
    let w = b - a;
    match at {
        Singular::Left => integrate(|s| 2.0 * w * s * f(a + w * s * s), 0.0, 1.0, rel_tol, 0.0),
        Singular::Right => integrate(|s| 2.0 * w * s * f(b - w * s * s), 0.0, 1.0, rel_tol, 0.0),
    }
}

/// `int_a^inf f` through `x = a + s/(1-s)`.
pub fn integrate_to_infinity(f: impl Fn(f64) -> f64, a: f64, rel_tol: f64) -> f64 {
    integrate(
        |s| {
            if s >= 1.0 {
                return 0.0;
            }
            let d = 1.0 - s;
            let v = f(a + s / d) / (d * d);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        rel_tol,
        0.0,
    )
}

/// `int_{R^3} g(|eta|, |xi - eta|) d eta` with `|xi| = rho`, in spherical
/// coordinates `(r, u = cos theta)` about the origin. `g` may be singular at
/// `eta = 0` and `eta = xi`.
fn two_center_integral(g: impl Fn(f64, f64) -> f64 + Copy, rho: f64, rel_tol: f64) -> f64 {
    // `delta = r - rho` is passed separately so `|xi - eta|^2 = delta^2 + 2 r rho v`
    // (with `v = 1 - u`) has no cancellation near the singular point.
    let inner = move |r: f64, delta: f64| {
        let h = move |v: f64| g(r, (delta * delta + 2.0 * r * rho * v).sqrt());
        let val = 2.0 * PI * r * r * integrate_singular(h, 0.0, 2.0, Singular::Left, rel_tol * 0.1);
        if val.is_finite() {
            val
        } else {
            0.0
        }
    };
    let half = 0.5 * rho;
    let near_origin = integrate_singular(|r| inner(r, r - rho), 0.0, half, Singular::Left, rel_tol);
    let below = integrate(
        |s| {
            let d = half * s * s;
            2.0 * half * s * inner(rho - d, -d)
        },
        0.0,
        1.0,
        rel_tol,
        0.0,
    );
    let above = integrate(
        |s| {
            let d = rho * s * s;
            2.0 * rho * s * inner(rho + d, d)
        },
        0.0,
        1.0,
        rel_tol,
        0.0,
    );
    let tail = integrate_to_infinity(|r| inner(r, r - rho), 2.0 * rho, rel_tol);
    near_origin + below + above + tail
}

/// `|xi| * int d eta / (|eta|^2 |xi - eta|^2)` by nested adaptive quadrature.
/// Independent of `|xi|` in the continuum (value `pi^3`).
pub fn ljs_constant(rho: f64) -> f64 {
    rho * two_center_integral(|a, b| 1.0 / (a * a * b * b), rho, 1e-9)
}

/// `|xi|^2 * int d eta / (|eta|^{5/2} |xi - eta|^{5/2})`.
pub fn ljs_local_constant(rho: f64) -> f64 {
    rho * rho * two_center_integral(|a, b| (a * b).powf(-2.5), rho, 1e-9)
}

/// Sharp constant in `e^{-x} <= c x^{-3/4}`: `sup x^{3/4} e^{-x}`.
pub fn kernel_sup_constant() -> f64 {
    0.75f64.powf(0.75) * (-0.75f64).exp()
}

/// `sup_{0 <= x <= x_max} x^a e^{-x}` by dense sampling.
pub fn sampled_sup(a: f64, x_max: f64, samples: usize) -> (f64, f64) {
    (0..=samples)
        .map(|i| {
            let x = x_max * i as f64 / samples as f64;
            (x, x.powf(a) * (-x).exp())
        })
        .fold((0.0, 0.0), |best, p| if p.1 > best.1 { p } else { best })
}

/// Golden-section refinement of a unimodal maximum on `[lo, hi]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

pub fn beta(a: f64, b: f64) -> f64 {
    gamma(a) * gamma(b) / gamma(a + b)
}

/// `c_alpha` with `I_alpha f = c_alpha |x|^{alpha-3} * f` in three dimensions.
pub fn riesz_normalizer(alpha: f64) -> f64 {
    gamma((3.0 - alpha) / 2.0) / (PI.powf(1.5) * 2f64.powf(alpha) * gamma(alpha / 2.0))
}

/// How a constant was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Quadrature,
    /// Operator-norm estimate restricted to the lattice (a lower estimate).
    GridEstimate,
    Sampled,
    UserSupplied,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedConstant {
    pub name: String,
    pub value: f64,
    pub provenance: Provenance,
    pub note: String,
}

impl DerivedConstant {
    pub fn new(name: &str, value: f64, provenance: Provenance, note: &str) -> Self {
        Self { name: name.into(), value, provenance, note: note.into() }
    }
}

/// `18 / (2 pi)^3`, the prefactor of the scalar majorant operator.
pub fn b0_prefactor() -> f64 {
    18.0 / (2.0 * PI).powi(3)
}

/// Constants that do not depend on a grid.
pub fn constant_table() -> Vec<DerivedConstant> {
    let c0 = ljs_constant(1.0);
    let c0p = ljs_local_constant(1.0);
    let ck = kernel_sup_constant();
    let b = beta(0.5, 0.25);
    vec![
        DerivedConstant::new("b0_prefactor", b0_prefactor(), Provenance::ClosedForm, "18/(2pi)^3"),
        DerivedConstant::new("c0", c0, Provenance::Quadrature, "|xi| int deta/(|eta|^2|xi-eta|^2)"),
        DerivedConstant::new("c_lejan", b0_prefactor() * c0, Provenance::Quadrature, "18 c0/(2pi)^3"),
        DerivedConstant::new("c0_local", c0p, Provenance::Quadrature, "|xi|^2 int deta/(|eta||xi-eta|)^{5/2}"),
        DerivedConstant::new("kernel_sup", ck, Provenance::ClosedForm, "sup x^{3/4} e^{-x}"),
        DerivedConstant::new("beta_half_quarter", b, Provenance::ClosedForm, "B(1/2,1/4)"),
        DerivedConstant::new(
            "c_lejan_local",
            ck * b0_prefactor() * b * c0p,
            Provenance::Quadrature,
            "kernel_sup * b0_prefactor * B(1/2,1/4) * c0_local",
        ),
        DerivedConstant::new("c_leilin", b0_prefactor(), Provenance::ClosedForm, "L1 product bound"),
        DerivedConstant::new("riesz_half", riesz_normalizer(0.5), Provenance::ClosedForm, "c_{1/2}"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_polynomial_exact() {
        let v = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14, 0.0);
        assert!((v - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-13);
    }

    #[test]
    fn singular_and_tail() {
        let v = integrate_singular(|x| 1.0 / x.sqrt(), 0.0, 1.0, Singular::Left, 1e-12);
        assert!((v - 2.0).abs() < 1e-10);
        let w = integrate_to_infinity(|x| (-x).exp(), 0.0, 1e-12);
        assert!((w - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lejan_constant_is_pi_cubed() {
        for rho in [0.5, 1.0, 2.0, 4.0] {
            let c = ljs_constant(rho);
            assert!((c / PI.powi(3) - 1.0).abs() < 1e-4, "rho {rho}: {c}");
        }
    }

    #[test]
    fn kernel_constant_matches_sampling() {
        let (x, v) = sampled_sup(0.75, 5.0, 2_000_000);
        assert!((x - 0.75).abs() < 1e-5);
        assert!((v - kernel_sup_constant()).abs() < 1e-10);
    }

    #[test]
    fn riesz_normalizer_at_two_is_newtonian() {
        assert!((riesz_normalizer(2.0) - 1.0 / (4.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn beta_quarter() {
        assert!((beta(0.5, 0.5) - PI).abs() < 1e-12);
    }
}
