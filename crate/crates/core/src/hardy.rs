//! H^2 norms, disk quadrature and the two Hardy-space identities the
//! composition estimates rest on.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticMap, SelfMapCertificate};
use crate::error::{Error, Result};
use crate::geometry::{mobius_raw, one_minus_modulus_sq};
use crate::quadrature::{
    circle_angles, circle_integral, golden_max, pairwise_sum, AdaptiveOptions, Focus, GradedRule,
};

/// Floor of the log-graded radial rule; `[0, LOG_FLOOR]` is handled analytically.
pub const LOG_FLOOR: f64 = 1e-10;

/// Polar product rule: `circle_nodes` equispaced angles times `radial_nodes`
/// Gauss-Legendre nodes graded toward the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub circle_nodes: usize,
    pub radial_nodes: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self {
            circle_nodes: 4096,
            radial_nodes: 256,
        }
    }
}

impl QuadratureGrid {
    pub fn new(circle_nodes: usize, radial_nodes: usize) -> Self {
        Self {
            circle_nodes,
            radial_nodes,
        }
    }

    fn doubled_radial(self) -> Self {
        Self {
            radial_nodes: 2 * self.radial_nodes,
            ..self
        }
    }
}

/// Two sides of an identity or inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
}

impl Comparison {
    pub fn ratio(&self) -> f64 {
        if self.rhs == 0.0 {
            if self.lhs == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.lhs / self.rhs
        }
    }

    /// `|lhs - rhs| / max(|rhs|, floor)`
    pub fn relative_gap(&self, floor: f64) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs().max(floor)
    }
}

/// Run a fallible integrand through an infallible quadrature kernel and
/// surface the first failure.
pub(crate) struct Trap {
    slot: RefCell<Option<Error>>,
}

impl Trap {
    pub(crate) fn new() -> Self {
        Self {
            slot: RefCell::new(None),
        }
    }

    pub(crate) fn value(&self, v: Result<f64>) -> f64 {
        match v {
            Ok(x) if x.is_finite() => x,
            Ok(_) => {
                self.slot.borrow_mut().get_or_insert(Error::NonFiniteSample);
                0.0
            }
            Err(e) => {
                self.slot.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    }

    pub(crate) fn finish(self) -> Result<()> {
        match self.slot.into_inner() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Adaptive `int_0^{2pi} h(e^{i theta}) d theta` that reports failures.
pub fn circle_integral_checked<F>(h: F, foci: &[Focus], what: &'static str) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let trap = Trap::new();
    let res = circle_integral(
        |t| trap.value(h(Complex64::from_polar(1.0, t))),
        foci,
        AdaptiveOptions::default(),
    );
    trap.finish()?;
    accept(res, what)
}

fn accept(res: crate::quadrature::Integral, what: &'static str) -> Result<f64> {
    let scale = res.value.abs().max(1e-300);
    if !res.converged && res.error > 1e-8 * scale && res.error > 1e-13 {
        return Err(Error::QuadratureNonConvergent {
            what,
            change: res.error / scale,
        });
    }
    Ok(res.value)
}

/// Poisson kernel `(1 - |a|^2) / |1 - conj(a) e^{i theta}|^2`, written as
/// `(1 - r^2) / ((1 - r)^2 + 4 r sin^2((theta - arg a)/2))` to stay accurate
/// at the peak when `|a|` is close to 1.
#[inline]
pub fn poisson_kernel(a: Complex64, theta: f64) -> f64 {
    let r = a.norm();
    if r == 0.0 {
        return 1.0;
    }
    let s = (0.5 * (theta - a.arg())).sin();
    (1.0 - r) * (1.0 + r) / ((1.0 - r) * (1.0 - r) + 4.0 * r * s * s)
}

/// `int_T h(sigma_a(xi)) |d xi|`, computed as `int_T h(eta) P_a(eta) |d eta|`.
///
/// The substitution moves the concentration of `sigma_a` near the boundary
/// into the Poisson kernel, whose peak the adaptive rule is told about.
pub fn pullback_integral<F>(h: F, a: Complex64, extra_foci: &[Focus], what: &'static str) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let mut foci = extra_foci.to_vec();
    let r = a.norm();
    if r > 0.0 {
        foci.push(Focus {
            angle: a.arg(),
            width: 1.0 - r,
        });
    }
    let trap = Trap::new();
    let res = circle_integral(
        |t| trap.value(h(Complex64::from_polar(1.0, t)).map(|v| v * poisson_kernel(a, t))),
        &foci,
        AdaptiveOptions::default(),
    );
    trap.finish()?;
    accept(res, what)
}

/// Angles near which the boundary values of `f` vary quickly: arguments of
/// poles and Blaschke zeros close to the circle.
pub fn singular_foci(f: &AnalyticMap) -> Vec<Focus> {
    use AnalyticMap::*;
    let mut out = Vec::new();
    let mut push = |b: Complex64| {
        let r = b.norm();
        if r > 0.8 {
            out.push(Focus {
                angle: b.arg(),
                width: 1.0 - r,
            });
        }
    };
    match f {
        Mobius(b) | TestFn { b, .. } | Pole { b, .. } => push(*b),
        Blaschke { zeros, .. } => zeros.iter().for_each(|z| push(*z)),
        Compose(_, inner) => out.extend(singular_foci(inner)),
        Sum(l, r) | Difference(l, r) | Product(l, r) => {
            out.extend(singular_foci(l));
            out.extend(singular_foci(r));
        }
        _ => {}
    }
    out
}

/// Boundary angles where `|1 - conj(b) phi(eta)|` has a small local minimum,
/// so that `sigma_b o phi` turns quickly there.
pub fn image_foci(phi: &AnalyticMap, b: Complex64) -> Result<Vec<Focus>> {
    const SAMPLES: usize = 1024;
    if b.norm() < 0.5 {
        return Ok(Vec::new());
    }
    let one = Complex64::new(1.0, 0.0);
    let gap = |t: f64| phi.eval_boundary(t).map(|w| (one - b.conj() * w).norm());
    let values: Vec<f64> = circle_angles(SAMPLES).map(gap).collect::<Result<_>>()?;
    let h = 2.0 * PI / SAMPLES as f64;
    let dphi = phi.derivative();
    let mut out = Vec::new();
    for j in 0..SAMPLES {
        let v = values[j];
        let prev = values[(j + SAMPLES - 1) % SAMPLES];
        let next = values[(j + 1) % SAMPLES];
        if v <= prev && v < next && v < 0.5 {
            let t0 = j as f64 * h;
            let (t, neg) = golden_max(|t| gap(t).map_or(f64::NEG_INFINITY, |g| -g), t0 - h, t0 + h);
            let depth = (-neg).max(1.0 - b.norm());
            let speed = dphi.eval_boundary(t)?.norm().max(1e-3);
            out.push(Focus {
                angle: t,
                width: (depth / speed).max(1e-14),
            });
        }
    }
    Ok(out)
}

/// `phi(a)` and `||sigma_{phi(a)} o phi o sigma_a||_2^2`, the latter as the
/// Poisson-weighted boundary integral of `|sigma_{phi(a)} o phi|^2`.
pub fn symbol_norm_sq(phi: &AnalyticMap, a: Complex64) -> Result<(Complex64, f64)> {
    let b = phi.eval(a)?;
    let gap = one_minus_modulus_sq(b);
    if !(gap >= 1e-12) {
        return Err(Error::NearBoundaryImage { modulus: b.norm() });
    }
    let mut foci = image_foci(phi, b)?;
    foci.extend(singular_foci(phi));
    let v = pullback_integral(
        |eta| Ok(mobius_raw(b, phi.eval(eta)?)?.norm_sqr()),
        a,
        &foci,
        "symbol norm",
    )?;
    Ok((b, v))
}

/// `||f||_2^2` by quadrature of `|f|^2` on the circle: periodic trapezoid
/// rule at `m` nodes, doubled until two successive values agree.
pub fn h2_norm_sq_quadrature(f: &AnalyticMap, m: usize) -> Result<f64> {
    let mut m = m.max(16);
    let mut prev = trapezoid_sq(f, 1.0, m)?;
    for _ in 0..6 {
        m *= 2;
        let next = trapezoid_sq(f, 1.0, m)?;
        if (next - prev).abs() <= 1e-13 * next.abs().max(1e-300) {
            return Ok(next);
        }
        prev = next;
    }
    let foci = singular_foci(f);
    circle_integral_checked(|z| Ok(f.eval(z)?.norm_sqr()), &foci, "h2 norm")
}

/// `int_0^{2pi} |f(r e^{i theta})|^2 d theta` by the trapezoid rule.
pub fn trapezoid_sq(f: &AnalyticMap, r: f64, m: usize) -> Result<f64> {
    let values: Vec<f64> = circle_angles(m)
        .map(|t| f.eval(Complex64::from_polar(r, t)).map(|v| v.norm_sqr()))
        .collect::<Result<_>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample);
    }
    Ok(pairwise_sum(&values) * 2.0 * PI / m as f64)
}

/// `||f||_2^2 = int_T |f|^2 |d xi|`: Parseval when the coefficients are
/// known in closed form, boundary quadrature otherwise.
pub fn h2_norm_sq(f: &AnalyticMap) -> Result<f64> {
    match f.exact_l2_sq() {
        Some(s) => Ok(2.0 * PI * s),
        None => h2_norm_sq_quadrature(f, QuadratureGrid::default().circle_nodes),
    }
}

pub fn h2_norm(f: &AnalyticMap) -> Result<f64> {
    h2_norm_sq(f).map(f64::sqrt)
}

/// `int_D h dm` by the polar product rule.
pub fn disk_integral<F>(h: F, grid: QuadratureGrid) -> Result<f64>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    let rule = GradedRule::new(grid.radial_nodes, LOG_FLOOR);
    let m = grid.circle_nodes;
    let rings: Vec<f64> = rule
        .nodes
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(&r, &w)| {
            let vals: Vec<f64> = circle_angles(m)
                .map(|t| h(Complex64::from_polar(r, t)))
                .collect();
            w * r * pairwise_sum(&vals) * 2.0 * PI / m as f64
        })
        .collect();
    let total = pairwise_sum(&rings);
    if !total.is_finite() {
        return Err(Error::NonFiniteSample);
    }
    Ok(total)
}

/// `int_D h(z) ln(1/|z|) dm(z)` with `u = r^2`, which turns the weight into
/// `-ln(u) / 4` against `du d theta`; the `[0, 1e-10]` remnant uses `h(0)`.
pub fn log_weighted_disk_integral<F>(h: F, grid: QuadratureGrid) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let rule = GradedRule::new(grid.radial_nodes, LOG_FLOOR);
    let m = grid.circle_nodes;
    let rings: Vec<Result<f64>> = rule
        .nodes
        .par_iter()
        .zip(rule.weights.par_iter())
        .map(|(&u, &w)| {
            let r = u.sqrt();
            let vals: Vec<f64> = circle_angles(m)
                .map(|t| h(Complex64::from_polar(r, t)))
                .collect::<Result<_>>()?;
            Ok(w * (-u.ln()) * 0.25 * pairwise_sum(&vals) * 2.0 * PI / m as f64)
        })
        .collect();
    let rings: Vec<f64> = rings.into_iter().collect::<Result<_>>()?;
    let eps = rule.floor;
    let remnant = h(Complex64::new(0.0, 0.0))? * 2.0 * PI * 0.25 * eps * (1.0 - eps.ln());
    let total = pairwise_sum(&rings) + remnant;
    if !total.is_finite() {
        return Err(Error::NonFiniteSample);
    }
    Ok(total)
}

/// [`log_weighted_disk_integral`] with the radial node count doubled until the
/// value is stable to `1e-6` relative.
pub fn log_weighted_disk_integral_guarded<F>(h: F, grid: QuadratureGrid, what: &'static str) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let mut g = grid;
    let mut prev = log_weighted_disk_integral(&h, g)?;
    for _ in 0..3 {
        g = g.doubled_radial();
        let next = log_weighted_disk_integral(&h, g)?;
        let change = (next - prev).abs() / next.abs().max(1e-12);
        if change <= 1e-6 {
            return Ok(next);
        }
        prev = next;
        if g.radial_nodes >= 4096 {
            return Err(Error::QuadratureNonConvergent { what, change });
        }
    }
    Err(Error::QuadratureNonConvergent {
        what,
        change: f64::NAN,
    })
}

/// Both sides of the Hardy-Littlewood identity
/// `pi^{-1} int_D |f'|^2 ln(1/|z|^2) dm = (2 pi)^{-1} int_T |f - f(0)|^2`.
pub fn hardy_littlewood_check(f: &AnalyticMap, grid: QuadratureGrid) -> Result<Comparison> {
    let df = f.derivative();
    let integral =
        log_weighted_disk_integral_guarded(|z| Ok(df.eval(z)?.norm_sqr()), grid, "Hardy-Littlewood area integral")?;
    let lhs = 2.0 * integral / PI;
    let f0 = f.eval(Complex64::new(0.0, 0.0))?;
    let centered = AnalyticMap::difference(f.clone(), AnalyticMap::Const(f0));
    let rhs = h2_norm_sq(&centered)? / (2.0 * PI);
    Ok(Comparison { lhs, rhs })
}

/// `||g o psi||_2` against `||g||_2 ||psi||_2` for `g(0) = 0 = psi(0)`.
pub fn composition_norm_check(g: &AnalyticMap, psi: &SelfMapCertificate) -> Result<Comparison> {
    let zero = Complex64::new(0.0, 0.0);
    let g0 = g.eval(zero)?.norm();
    let p0 = psi.map.eval(zero)?.norm();
    if g0 > 1e-12 || p0 > 1e-12 {
        return Err(Error::PreconditionViolated(format!(
            "need g(0) = 0 = psi(0), got |g(0)| = {g0:e}, |psi(0)| = {p0:e}"
        )));
    }
    let composed = g.compose(psi);
    let lhs = h2_norm(&composed)?;
    let rhs = h2_norm(g)? * h2_norm(&psi.map)?;
    Ok(Comparison { lhs, rhs })
}
