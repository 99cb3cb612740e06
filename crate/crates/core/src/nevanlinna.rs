//! Nevanlinna counting function `N(phi, w) = sum_{phi(z) = w} ln(1/|z|)` by
//! root finding on the cleared rational equation, and the identities it
//! enters: the change of variables for the Dirichlet-type area integral, the
//! norm identity `||psi||^2 = 4 int N(psi, .) dm`, and the sub-mean-value bound.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::{AnalyticMap, SelfMapCertificate};
use crate::error::{Error, Result};
use crate::geometry::DiskPoint;
use crate::hardy::{log_weighted_disk_integral_guarded, symbol_norm_sq, Comparison, QuadratureGrid, Trap};
use crate::quadrature::{adaptive, circle_angles, AdaptiveOptions};

/// Degree budget for cleared equations.
pub const DEGREE_BUDGET: usize = 64;
/// Preimages farther than this from `w` after polishing are discarded.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Roots closer than this are one root with multiplicity.
pub const CLUSTER_TOL: f64 = 1e-7;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Polynomial with ascending coefficients.
pub type Poly = Vec<Complex64>;

fn degree(p: &[Complex64]) -> usize {
    p.iter().rposition(|c| *c != ZERO).unwrap_or(0)
}

pub fn poly_eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Poly {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == ZERO {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[Complex64], b: &[Complex64], sign: f64) -> Poly {
    let mut out = vec![ZERO; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += sign * y;
    }
    out
}

fn poly_pow(a: &[Complex64], k: usize) -> Poly {
    let mut out = vec![ONE];
    for _ in 0..k {
        out = poly_mul(&out, a);
    }
    out
}

/// `phi = num / den` with both polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    fn poly(p: Poly) -> Self {
        Rational { num: p, den: vec![ONE] }
    }

    pub fn degree(&self) -> usize {
        degree(&self.num).max(degree(&self.den))
    }

    fn checked(self) -> Result<Self> {
        let d = self.degree();
        if d > DEGREE_BUDGET {
            return Err(Error::DegreeBudgetExceeded {
                degree: d,
                budget: DEGREE_BUDGET,
            });
        }
        Ok(self)
    }

    /// Reduce a node tree to a single quotient of polynomials.
    pub fn from_map(f: &AnalyticMap) -> Result<Self> {
        use AnalyticMap::*;
        let r = match f {
            Const(c) => Rational::poly(vec![*c]),
            Monomial(n) => {
                let mut v = vec![ZERO; *n as usize + 1];
                v[*n as usize] = ONE;
                Rational::poly(v)
            }
            Affine { alpha, beta } => Rational::poly(vec![*alpha, *beta]),
            Scale(s) => Rational::poly(vec![ZERO, *s]),
            Taylor { coeffs, tail_bound } => {
                if *tail_bound > 0.0 {
                    return Err(Error::NotRational);
                }
                Rational::poly(coeffs.clone())
            }
            Mobius(b) => Rational {
                num: vec![*b, -ONE],
                den: vec![ONE, -b.conj()],
            },
            Blaschke { zeros, unimodular } => {
                let mut num = vec![*unimodular];
                let mut den = vec![ONE];
                for zk in zeros {
                    num = poly_mul(&num, &[-zk, ONE]);
                    den = poly_mul(&den, &[ONE, -zk.conj()]);
                }
                Rational { num, den }
            }
            TestFn { b, p } => Rational {
                num: vec![Complex64::new(crate::analytic::test_fn_scale(*b, *p), 0.0)],
                den: vec![ONE, -b.conj()],
            },
            Pole { coef, b, power } => Rational {
                num: vec![*coef],
                den: poly_pow(&[ONE, -b.conj()], *power as usize),
            },
            Sum(l, r) | Difference(l, r) => {
                let a = Rational::from_map(l)?;
                let b = Rational::from_map(r)?;
                let sign = if matches!(f, Sum(..)) { 1.0 } else { -1.0 };
                if a.den == b.den {
                    Rational {
                        num: poly_add(&a.num, &b.num, sign),
                        den: a.den,
                    }
                } else {
                    Rational {
                        num: poly_add(&poly_mul(&a.num, &b.den), &poly_mul(&b.num, &a.den), sign),
                        den: poly_mul(&a.den, &b.den),
                    }
                }
            }
            Product(l, r) => {
                let a = Rational::from_map(l)?;
                let b = Rational::from_map(r)?;
                Rational {
                    num: poly_mul(&a.num, &b.num),
                    den: poly_mul(&a.den, &b.den),
                }
            }
            Compose(outer, inner) => {
                let o = Rational::from_map(outer)?;
                let i = Rational::from_map(inner)?;
                let n = o.degree();
                if n * i.degree().max(1) > DEGREE_BUDGET {
                    return Err(Error::DegreeBudgetExceeded {
                        degree: n * i.degree(),
                        budget: DEGREE_BUDGET,
                    });
                }
                // outer(A/B) = sum p_k A^k B^{n-k} / sum q_k A^k B^{n-k}
                let a_pows: Vec<Poly> = (0..=n).map(|k| poly_pow(&i.num, k)).collect();
                let b_pows: Vec<Poly> = (0..=n).map(|k| poly_pow(&i.den, k)).collect();
                let combine = |coeffs: &[Complex64]| {
                    let mut acc = vec![ZERO];
                    for (k, c) in coeffs.iter().enumerate().take(n + 1) {
                        if *c == ZERO {
                            continue;
                        }
                        let term: Poly = poly_mul(&a_pows[k], &b_pows[n - k]).iter().map(|x| x * c).collect();
                        acc = poly_add(&acc, &term, 1.0);
                    }
                    acc
                };
                Rational {
                    num: combine(&o.num),
                    den: combine(&o.den),
                }
            }
        };
        r.checked()
    }
}

/// All roots of `p` by Aberth-Ehrlich simultaneous iteration followed by
/// Newton polishing.
pub fn polynomial_roots(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(Vec::new());
    }
    // drop leading coefficients that are zero up to rounding
    let mut n = degree(p);
    while n > 0 && p[n].norm() <= 1e-14 * scale {
        n -= 1;
    }
    let p = &p[..=n];
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-p[0] / p[1]]),
        _ => {}
    }
    let dp: Poly = p.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    let radius = (p[0].norm() / p[n].norm()).powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut converged = false;
    for _ in 0..800 {
        let mut biggest: f64 = 0.0;
        for k in 0..n {
            let pv = poly_eval(p, z[k]);
            if pv == ZERO {
                continue;
            }
            let ratio = pv / poly_eval(&dp, z[k]);
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| ONE / (z[k] - z[j])).sum();
            let step = ratio / (ONE - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                biggest = biggest.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if biggest <= 1e-15 {
            converged = true;
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let d = poly_eval(&dp, *zk);
            if d == ZERO {
                break;
            }
            let step = poly_eval(p, *zk) / d;
            let next = *zk - step;
            if !(next.re.is_finite() && next.im.is_finite())
                || poly_eval(p, next).norm() > poly_eval(p, *zk).norm()
            {
                break;
            }
            *zk = next;
        }
    }
    if !converged {
        // accept roots whose backward error is at the rounding level
        let ok = z.iter().all(|zk| {
            let mag: f64 = p.iter().rev().fold(0.0, |acc, c| acc * zk.norm() + c.norm());
            poly_eval(p, *zk).norm() <= 1e-10 * mag
        });
        if !ok {
            return Err(Error::RootFindingDiverged { degree: n });
        }
    }
    Ok(z)
}

/// A root inside the disk with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Preimage {
    pub z: DiskPoint,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreimageSet {
    pub target: Complex64,
    pub roots: Vec<Preimage>,
}

/// Preimage solver for one map, reusable across targets.
#[derive(Debug, Clone)]
pub struct PreimageSolver {
    map: AnalyticMap,
    rational: Rational,
    phi0: Complex64,
}

impl PreimageSolver {
    pub fn new(map: &AnalyticMap) -> Result<Self> {
        Ok(Self {
            map: map.clone(),
            rational: Rational::from_map(map)?,
            phi0: map.eval(ZERO)?,
        })
    }

    pub fn value_at_zero(&self) -> Complex64 {
        self.phi0
    }

    pub fn preimages(&self, w: Complex64) -> Result<PreimageSet> {
        let eq = poly_add(&self.rational.num, &poly_mul(&self.rational.den, &[w]), -1.0);
        let roots = polynomial_roots(&eq)?;
        let mut inside: Vec<Complex64> = Vec::new();
        for z in roots {
            if !(z.norm() < 1.0 - 1e-12) {
                continue;
            }
            // common factors of num and den produce roots that are not preimages
            match self.map.eval(z) {
                Ok(v) if (v - w).norm() <= RESIDUAL_TOL => inside.push(z),
                _ => {}
            }
        }
        inside.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut clusters: Vec<(Complex64, usize)> = Vec::new();
        for z in inside {
            match clusters.iter_mut().find(|(c, _)| (*c - z).norm() <= CLUSTER_TOL) {
                Some((c, m)) => {
                    *c = (*c * *m as f64 + z) / (*m as f64 + 1.0);
                    *m += 1;
                }
                None => clusters.push((z, 1)),
            }
        }
        let roots = clusters
            .into_iter()
            .map(|(z, multiplicity)| {
                Ok(Preimage {
                    z: DiskPoint::new(z)?,
                    multiplicity,
                })
            })
            .collect::<Result<_>>()?;
        Ok(PreimageSet { target: w, roots })
    }

    /// `N(phi, w)`.
    pub fn counting(&self, w: Complex64) -> Result<f64> {
        if (w - self.phi0).norm() < 1e-12 {
            return Err(Error::TargetAtPhiZero);
        }
        let set = self.preimages(w)?;
        Ok(set
            .roots
            .iter()
            .map(|r| r.multiplicity as f64 * (1.0 / r.z.modulus()).ln())
            .sum())
    }

    /// `N(phi, w)` with targets within `1e-8` of `phi(0)` pushed radially
    /// outward by `1e-6`, for use at quadrature nodes.
    fn counting_at_node(&self, w: Complex64) -> Result<f64> {
        let d = w - self.phi0;
        let w = if d.norm() < 1e-8 {
            let dir = if d.norm() > 0.0 { d / d.norm() } else { ONE };
            self.phi0 + dir * 1e-6
        } else {
            w
        };
        self.counting(w)
    }
}

pub fn preimages(phi: &AnalyticMap, w: Complex64) -> Result<PreimageSet> {
    PreimageSolver::new(phi)?.preimages(w)
}

pub fn counting_function(phi: &AnalyticMap, w: Complex64) -> Result<f64> {
    PreimageSolver::new(phi)?.counting(w)
}

/// `int_D g dm` in polar coordinates about `center`: the outer angular and
/// inner radial integrals are both adaptive, the inner one graded toward the
/// center where the counting function has its logarithmic pole.
pub fn polar_integral_about<F>(center: Complex64, g: F, what: &'static str) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let inner_opts = AdaptiveOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-9,
        max_panels: 2000,
    };
    let outer_opts = AdaptiveOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-8,
        max_panels: 400,
    };
    let trap = Trap::new();
    let ray = |theta: f64| -> Result<f64> {
        let dir = Complex64::from_polar(1.0, theta);
        // |center + rho dir| = 1
        let proj = (center.conj() * dir).re;
        let reach = -proj + (proj * proj + 1.0 - center.norm_sqr()).max(0.0).sqrt();
        if reach <= 0.0 {
            return Ok(0.0);
        }
        let breaks: Vec<f64> = [0.0, 1e-6, 1e-4, 1e-2, 0.1, 0.3, 0.6, 1.0]
            .iter()
            .map(|s| s * reach)
            .collect();
        let inner = Trap::new();
        let res = adaptive(|rho| inner.value(g(center + dir * rho).map(|v| v * rho)), &breaks, inner_opts);
        inner.finish()?;
        if !res.converged && res.error > 1e-6 * res.value.abs().max(1e-12) {
            return Err(Error::QuadratureNonConvergent {
                what,
                change: res.error / res.value.abs().max(1e-300),
            });
        }
        Ok(res.value)
    };
    let breaks: Vec<f64> = (0..=16).map(|j| 2.0 * PI * j as f64 / 16.0).collect();
    let res = adaptive(|t| trap.value(ray(t)), &breaks, outer_opts);
    trap.finish()?;
    if !res.converged && res.error > 1e-5 * res.value.abs().max(1e-12) {
        return Err(Error::QuadratureNonConvergent {
            what,
            change: res.error / res.value.abs().max(1e-300),
        });
    }
    Ok(res.value)
}

/// Both sides of the change of variables
/// `int_D |(f o phi)'|^2 ln(1/|z|) dm = int_D |f'(w)|^2 N(phi, w) dm(w)`.
pub fn change_of_variable_check(
    f: &AnalyticMap,
    phi: &SelfMapCertificate,
    grid: QuadratureGrid,
) -> Result<Comparison> {
    let composed = f.compose(phi).derivative();
    let lhs = log_weighted_disk_integral_guarded(
        |z| Ok(composed.eval(z)?.norm_sqr()),
        grid,
        "composed area integral",
    )?;
    let df = f.derivative();
    if df.polynomial().is_some_and(|p| p.iter().all(|c| *c == ZERO)) {
        return Ok(Comparison { lhs, rhs: 0.0 });
    }
    let solver = PreimageSolver::new(&phi.map)?;
    let rhs = polar_integral_about(
        solver.value_at_zero(),
        |w| Ok(df.eval(w)?.norm_sqr() * solver.counting_at_node(w)?),
        "counting-function area integral",
    )?;
    Ok(Comparison { lhs, rhs })
}

/// Both sides of `||psi_a||_2^2 = 4 int_D N(psi_a, z) dm(z)` for
/// `psi_a = sigma_{phi(a)} o phi o sigma_a`.
pub fn norm_counting_identity(phi: &SelfMapCertificate, a: DiskPoint) -> Result<Comparison> {
    let (b, lhs) = symbol_norm_sq(&phi.map, a.value())?;
    let psi = AnalyticMap::Compose(
        Box::new(AnalyticMap::Mobius(b)),
        Box::new(AnalyticMap::Compose(
            Box::new(phi.map.clone()),
            Box::new(AnalyticMap::Mobius(a.value())),
        )),
    );
    let solver = PreimageSolver::new(&psi)?;
    let zero_map = solver.rational.num.iter().all(|c| c.norm() <= 1e-14);
    if zero_map {
        return Ok(Comparison { lhs, rhs: 0.0 });
    }
    let integral = polar_integral_about(ZERO, |z| solver.counting_at_node(z), "counting-function integral")?;
    Ok(Comparison {
        lhs,
        rhs: 4.0 * integral,
    })
}

/// Outcome of the sub-mean-value check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmithBound {
    /// `max |w|^2 N(psi, w)` over the target grid.
    pub w: f64,
    /// `max_{|w| >= 1/2} N(psi, w) / ln(1/|w|)` divided by `4 W / ln 2`.
    pub worst_ratio: f64,
}

/// Target radii for the sub-mean-value check.
pub fn smith_radii() -> Vec<f64> {
    let mut r: Vec<f64> = (1..=19).map(|k| 0.05 * k as f64).collect();
    r.extend([0.97, 0.99, 0.995]);
    r
}

/// `sup_{|w| >= 1/2} N(psi, w) / ln(1/|w|) <= 4 (ln 2)^{-1} sup_w |w|^2 N(psi, w)`
/// sampled on `smith_radii() x angles`.
pub fn smith_bound_check(psi: &SelfMapCertificate, angles: usize) -> Result<SmithBound> {
    let solver = PreimageSolver::new(&psi.map)?;
    if solver.value_at_zero().norm() > 1e-12 {
        return Err(Error::PreconditionViolated("need psi(0) = 0".into()));
    }
    let mut big_w: f64 = 0.0;
    let mut worst: f64 = 0.0;
    for r in smith_radii() {
        for t in circle_angles(angles) {
            let w = Complex64::from_polar(r, t);
            let n = solver.counting(w)?;
            big_w = big_w.max(r * r * n);
            if r >= 0.5 {
                worst = worst.max(n / (1.0 / r).ln());
            }
        }
    }
    let bound = 4.0 * big_w / LN_2;
    let worst_ratio = if bound > 0.0 { worst / bound } else if worst == 0.0 { 0.0 } else { f64::INFINITY };
    Ok(SmithBound {
        w: big_w,
        worst_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::certify_self_map;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(c(re, im)).unwrap()
    }

    #[test]
    fn roots_of_known_polynomials() {
        // (z - 1)(z + 2)(z - i)
        let p = poly_mul(&poly_mul(&[-ONE, ONE], &[c(2.0, 0.0), ONE]), &[c(0.0, -1.0), ONE]);
        let mut r = polynomial_roots(&p).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0] - c(-2.0, 0.0)).norm() < 1e-13);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-13);
        assert!((r[2] - ONE).norm() < 1e-13);
    }

    #[test]
    fn preimage_examples() {
        let id = preimages(&AnalyticMap::identity(), c(0.3, 0.2)).unwrap();
        assert_eq!(id.roots.len(), 1);
        assert!((id.roots[0].z.value() - c(0.3, 0.2)).norm() < 1e-15);
        let sq = preimages(&AnalyticMap::Monomial(2), c(0.25, 0.0)).unwrap();
        assert_eq!(sq.roots.len(), 2);
        assert!((sq.roots[0].z.value() - c(-0.5, 0.0)).norm() < 1e-14);
        assert!((sq.roots[1].z.value() - c(0.5, 0.0)).norm() < 1e-14);
        assert!(sq.roots.iter().all(|r| r.multiplicity == 1));
        assert!(preimages(&AnalyticMap::Monomial(2), c(4.0, 0.0)).unwrap().roots.is_empty());
    }

    #[test]
    fn double_points_cluster() {
        // (z - 0.3)^2 hits 0 twice at 0.3
        let p = AnalyticMap::taylor(vec![c(0.09, 0.0), c(-0.6, 0.0), ONE]).unwrap();
        let set = preimages(&p, ZERO).unwrap();
        assert_eq!(set.roots.len(), 1);
        assert_eq!(set.roots[0].multiplicity, 2);
    }

    #[test]
    fn counting_function_examples() {
        let w = c(0.2, -0.4);
        let expected = (1.0 / w.norm()).ln();
        assert_relative_eq!(counting_function(&AnalyticMap::identity(), w).unwrap(), expected, max_relative = 1e-14);
        assert_relative_eq!(counting_function(&AnalyticMap::Monomial(2), w).unwrap(), expected, max_relative = 1e-12);
        assert_relative_eq!(counting_function(&AnalyticMap::Monomial(3), w).unwrap(), expected, max_relative = 1e-12);
        assert_eq!(counting_function(&AnalyticMap::Const(c(0.5, 0.0)), w).unwrap(), 0.0);
        assert_eq!(
            counting_function(&AnalyticMap::Monomial(2), ZERO),
            Err(Error::TargetAtPhiZero)
        );
    }

    #[test]
    fn blaschke_clearing_adds_no_disk_roots() {
        let zeros = [dp(0.3, 0.0), dp(-0.5, 0.5), dp(0.0, -0.9)];
        let b = AnalyticMap::blaschke(&zeros, ONE).unwrap();
        let r = Rational::from_map(&b).unwrap();
        for root in polynomial_roots(&r.den).unwrap() {
            assert!(root.norm() > 1.0);
        }
        for k in 0..20 {
            let w = Complex64::from_polar(0.6, 0.3 * k as f64);
            let set = preimages(&b, w).unwrap();
            let count: usize = set.roots.iter().map(|r| r.multiplicity).sum();
            assert_eq!(count, 3);
            for r in &set.roots {
                assert!((b.eval(r.z.value()).unwrap() - w).norm() <= RESIDUAL_TOL);
            }
        }
    }

    #[test]
    fn littlewood_inequality_and_positivity() {
        let maps = [
            AnalyticMap::affine(c(0.5, 0.0), c(0.5, 0.0)),
            AnalyticMap::mobius(dp(0.5, 0.0)),
            AnalyticMap::product(AnalyticMap::identity(), AnalyticMap::mobius(dp(0.5, 0.0))),
            AnalyticMap::Monomial(3),
        ];
        for phi in maps {
            let solver = PreimageSolver::new(&phi).unwrap();
            let c0 = solver.value_at_zero();
            for i in 1..10 {
                for k in 0..12 {
                    let w = Complex64::from_polar(0.1 * i as f64, 0.5 * k as f64 + 0.1);
                    if (w - c0).norm() < 1e-6 {
                        continue;
                    }
                    let n = solver.counting(w).unwrap();
                    let bound = -crate::geometry::mobius_raw(c0, w).unwrap().norm().ln();
                    assert!(n >= 0.0);
                    assert!(n <= bound + 1e-10, "{phi}: N = {n} > {bound}");
                }
            }
        }
    }

    #[test]
    fn change_of_variable_closed_forms() {
        let g = QuadratureGrid::new(256, 128);
        let sq = certify_self_map(&AnalyticMap::Monomial(2), 64).unwrap();
        let r = change_of_variable_check(&AnalyticMap::identity(), &sq, g).unwrap();
        assert_relative_eq!(r.lhs, PI / 2.0, max_relative = 1e-8);
        assert_relative_eq!(r.rhs, PI / 2.0, max_relative = 1e-6);
        let id = certify_self_map(&AnalyticMap::identity(), 64).unwrap();
        let r = change_of_variable_check(&AnalyticMap::identity(), &id, g).unwrap();
        assert_relative_eq!(r.lhs, PI / 2.0, max_relative = 1e-8);
        assert_relative_eq!(r.rhs, PI / 2.0, max_relative = 1e-6);
        let r = change_of_variable_check(&AnalyticMap::Const(c(0.2, 0.0)), &id, g).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }

    #[test]
    fn norm_identity_closed_forms() {
        let id = certify_self_map(&AnalyticMap::identity(), 64).unwrap();
        let r = norm_counting_identity(&id, DiskPoint::origin()).unwrap();
        assert_relative_eq!(r.lhs, 2.0 * PI, max_relative = 1e-10);
        assert_relative_eq!(r.rhs, 2.0 * PI, max_relative = 1e-6);
        let sq = certify_self_map(&AnalyticMap::Monomial(2), 64).unwrap();
        let r = norm_counting_identity(&sq, DiskPoint::origin()).unwrap();
        assert_relative_eq!(r.lhs, 2.0 * PI, max_relative = 1e-10);
        assert_relative_eq!(r.rhs, 2.0 * PI, max_relative = 1e-6);
        let k = certify_self_map(&AnalyticMap::Const(c(0.3, 0.1)), 64).unwrap();
        let r = norm_counting_identity(&k, dp(0.4, 0.0)).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }

    #[test]
    fn smith_bound_for_identity() {
        let id = certify_self_map(&AnalyticMap::identity(), 64).unwrap();
        let s = smith_bound_check(&id, 16).unwrap();
        // W is sampled near its maximum 1/(2e) at |w| = e^{-1/2}
        assert!(s.w <= 1.0 / (2.0 * std::f64::consts::E) + 1e-15);
        assert!(s.w >= 0.18);
        assert!(s.worst_ratio <= 1.0);
    }
}
