//! Analytic functions on the disk as closed-form node trees.
//!
//! Every node extends continuously to the closed disk, so boundary values are
//! plain evaluations on `|z| = 1`. Taylor coefficients are exact for the
//! closed forms that have them and are otherwise recovered by sampling a
//! circle just inside the boundary and inverting a discrete Fourier transform.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{mobius_raw, DiskPoint};
use crate::quadrature::{circle_angles, golden_max};

/// Default Taylor truncation.
pub const N_MAX: usize = 256;

/// Recovered coefficients beyond this magnitude count as "not yet decayed".
pub const DECAY_FLOOR: f64 = 1e-12;

const DENOMINATOR_FLOOR: f64 = 1e-15;
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Node tree for an analytic function on the unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AnalyticMap {
    Const(Complex64),
    /// `z^n`
    Monomial(u32),
    /// `alpha + beta z`
    Affine { alpha: Complex64, beta: Complex64 },
    /// `s z`
    Scale(Complex64),
    /// Polynomial `sum_n c_n z^n`; `tail_bound` bounds the H^2 norm of a
    /// discarded tail when the polynomial came from truncation.
    Taylor { coeffs: Vec<Complex64>, tail_bound: f64 },
    /// The involution `(b - z) / (1 - conj(b) z)`.
    Mobius(Complex64),
    /// `u * prod_k (z - z_k) / (1 - conj(z_k) z)`.
    Blaschke {
        zeros: Vec<Complex64>,
        unimodular: Complex64,
    },
    /// `(1 - |b|^2)^((1 + p)/2) / (1 - conj(b) z)`.
    TestFn { b: Complex64, p: f64 },
    /// `coef / (1 - conj(b) z)^power`.
    Pole {
        coef: Complex64,
        b: Complex64,
        power: u32,
    },
    /// `outer(inner(z))`
    Compose(Box<AnalyticMap>, Box<AnalyticMap>),
    Sum(Box<AnalyticMap>, Box<AnalyticMap>),
    Difference(Box<AnalyticMap>, Box<AnalyticMap>),
    Product(Box<AnalyticMap>, Box<AnalyticMap>),
}

/// Exact Taylor data: `coeffs[0..n]` plus the exact squared l^2 mass of the
/// remaining coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub coeffs: Vec<Complex64>,
    pub tail_sq: f64,
}

impl Coefficients {
    /// `sum |a_n|^2` including the tail.
    pub fn l2_sq(&self) -> f64 {
        let head: Vec<f64> = self.coeffs.iter().map(|c| c.norm_sqr()).collect();
        crate::quadrature::pairwise_sum(&head) + self.tail_sq
    }
}

impl AnalyticMap {
    pub fn identity() -> Self {
        AnalyticMap::Monomial(1)
    }

    pub fn constant(c: Complex64) -> Self {
        AnalyticMap::Const(c)
    }

    pub fn mobius(b: DiskPoint) -> Self {
        AnalyticMap::Mobius(b.value())
    }

    pub fn affine(alpha: Complex64, beta: Complex64) -> Self {
        AnalyticMap::Affine { alpha, beta }
    }

    pub fn taylor(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::taylor_with_tail(coeffs, 0.0)
    }

    pub fn taylor_with_tail(coeffs: Vec<Complex64>, tail_bound: f64) -> Result<Self> {
        if coeffs.len() > N_MAX + 1 {
            return Err(Error::DegreeBudgetExceeded {
                degree: coeffs.len() - 1,
                budget: N_MAX,
            });
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFiniteSample);
        }
        Ok(AnalyticMap::Taylor { coeffs, tail_bound })
    }

    pub fn blaschke(zeros: &[DiskPoint], unimodular: Complex64) -> Result<Self> {
        if (unimodular.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::PreconditionViolated(format!(
                "Blaschke factor must be unimodular, got modulus {}",
                unimodular.norm()
            )));
        }
        Ok(AnalyticMap::Blaschke {
            zeros: zeros.iter().map(|z| z.value()).collect(),
            unimodular,
        })
    }

    pub fn sum(lhs: AnalyticMap, rhs: AnalyticMap) -> Self {
        AnalyticMap::Sum(Box::new(lhs), Box::new(rhs))
    }

    pub fn difference(lhs: AnalyticMap, rhs: AnalyticMap) -> Self {
        AnalyticMap::Difference(Box::new(lhs), Box::new(rhs))
    }

    pub fn product(lhs: AnalyticMap, rhs: AnalyticMap) -> Self {
        AnalyticMap::Product(Box::new(lhs), Box::new(rhs))
    }

    /// `c * self`
    pub fn scaled(&self, c: Complex64) -> Self {
        AnalyticMap::Compose(Box::new(AnalyticMap::Scale(c)), Box::new(self.clone()))
    }

    /// `e^{i alpha} self(e^{-i alpha} z)`
    pub fn rotated(&self, alpha: f64) -> Self {
        let u = Complex64::from_polar(1.0, alpha);
        AnalyticMap::Compose(
            Box::new(AnalyticMap::Scale(u)),
            Box::new(AnalyticMap::Compose(
                Box::new(self.clone()),
                Box::new(AnalyticMap::Scale(u.conj())),
            )),
        )
    }

    /// Composition with an inner map that is certified to map the disk into itself.
    pub fn compose(&self, inner: &SelfMapCertificate) -> Self {
        AnalyticMap::Compose(Box::new(self.clone()), Box::new(inner.map.clone()))
    }

    /// Composition with an arbitrary inner map; `self` must be entire.
    pub fn compose_entire(&self, inner: &AnalyticMap) -> Result<Self> {
        if !self.is_entire() {
            return Err(Error::MissingCertificate);
        }
        Ok(AnalyticMap::Compose(
            Box::new(self.clone()),
            Box::new(inner.clone()),
        ))
    }

    /// True when the node is defined on the whole plane.
    pub fn is_entire(&self) -> bool {
        use AnalyticMap::*;
        match self {
            Const(_) | Monomial(_) | Affine { .. } | Scale(_) => true,
            Taylor { tail_bound, .. } => *tail_bound == 0.0,
            Mobius(_) | Blaschke { .. } | TestFn { .. } | Pole { .. } => false,
            Compose(o, i) | Sum(o, i) | Difference(o, i) | Product(o, i) => {
                o.is_entire() && i.is_entire()
            }
        }
    }

    /// True when some Taylor node in the tree carries a truncation tail.
    pub fn has_truncated_series(&self) -> bool {
        use AnalyticMap::*;
        match self {
            Taylor { tail_bound, .. } => *tail_bound > 0.0,
            Compose(o, i) | Sum(o, i) | Difference(o, i) | Product(o, i) => {
                o.has_truncated_series() || i.has_truncated_series()
            }
            _ => false,
        }
    }

    /// Value at `z`, `|z| <= 1`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        use AnalyticMap::*;
        Ok(match self {
            Const(c) => *c,
            Monomial(n) => z.powu(*n),
            Affine { alpha, beta } => alpha + beta * z,
            Scale(s) => s * z,
            Taylor { coeffs, .. } => horner(coeffs, z),
            Mobius(b) => mobius_raw(*b, z)?,
            Blaschke { zeros, unimodular } => {
                let mut acc = *unimodular;
                for zk in zeros {
                    let den = ONE - zk.conj() * z;
                    check_denominator(den)?;
                    acc *= (z - zk) / den;
                }
                acc
            }
            TestFn { b, p } => {
                let den = ONE - b.conj() * z;
                check_denominator(den)?;
                test_fn_scale(*b, *p) / den
            }
            Pole { coef, b, power } => {
                let den = ONE - b.conj() * z;
                check_denominator(den)?;
                coef / den.powu(*power)
            }
            Compose(outer, inner) => outer.eval(inner.eval(z)?)?,
            Sum(l, r) => l.eval(z)? + r.eval(z)?,
            Difference(l, r) => l.eval(z)? - r.eval(z)?,
            Product(l, r) => l.eval(z)? * r.eval(z)?,
        })
    }

    /// Value on the unit circle at angle `theta`.
    #[inline]
    pub fn eval_boundary(&self, theta: f64) -> Result<Complex64> {
        self.eval(Complex64::from_polar(1.0, theta))
    }

    /// Symbolic derivative.
    pub fn derivative(&self) -> AnalyticMap {
        use AnalyticMap::*;
        match self {
            Const(_) => Const(ZERO),
            Monomial(0) => Const(ZERO),
            Monomial(1) => Const(ONE),
            Monomial(n) => Product(
                Box::new(Const(Complex64::new(*n as f64, 0.0))),
                Box::new(Monomial(n - 1)),
            ),
            Affine { beta, .. } => Const(*beta),
            Scale(s) => Const(*s),
            Taylor { coeffs, tail_bound } => {
                let d: Vec<Complex64> = coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(n, c)| c * n as f64)
                    .collect();
                Taylor {
                    coeffs: if d.is_empty() { vec![ZERO] } else { d },
                    tail_bound: *tail_bound,
                }
            }
            Mobius(b) => Pole {
                coef: Complex64::new(b.norm_sqr() - 1.0, 0.0),
                b: *b,
                power: 2,
            },
            Blaschke { zeros, unimodular } => blaschke_derivative(zeros, *unimodular),
            TestFn { b, p } => Pole {
                coef: test_fn_scale(*b, *p) * b.conj(),
                b: *b,
                power: 2,
            },
            Pole { coef, b, power } => Pole {
                coef: coef * b.conj() * *power as f64,
                b: *b,
                power: power + 1,
            },
            Compose(outer, inner) => Product(
                Box::new(Compose(Box::new(outer.derivative()), inner.clone())),
                Box::new(inner.derivative()),
            ),
            Sum(l, r) => Sum(Box::new(l.derivative()), Box::new(r.derivative())),
            Difference(l, r) => Difference(Box::new(l.derivative()), Box::new(r.derivative())),
            Product(l, r) => Sum(
                Box::new(Product(Box::new(l.derivative()), r.clone())),
                Box::new(Product(l.clone(), Box::new(r.derivative()))),
            ),
        }
    }

    /// Closed-form Taylor coefficients `a_0..a_{n-1}` with the exact squared
    /// tail mass, when the node admits them.
    pub fn exact_coefficients(&self, n: usize) -> Option<Coefficients> {
        use AnalyticMap::*;
        let finite = |mut v: Vec<Complex64>| {
            let tail: f64 = if v.len() > n {
                v[n..].iter().map(|c| c.norm_sqr()).sum()
            } else {
                0.0
            };
            v.resize(n, ZERO);
            Some(Coefficients {
                coeffs: v,
                tail_sq: tail,
            })
        };
        match self {
            Const(c) => finite(vec![*c]),
            Monomial(k) => {
                let mut v = vec![ZERO; *k as usize + 1];
                v[*k as usize] = ONE;
                finite(v)
            }
            Affine { alpha, beta } => finite(vec![*alpha, *beta]),
            Scale(s) => finite(vec![ZERO, *s]),
            Taylor { coeffs, tail_bound } if *tail_bound == 0.0 => finite(coeffs.clone()),
            Mobius(b) => {
                // b - (1 - |b|^2) sum_{k>=1} conj(b)^{k-1} z^k
                let w = 1.0 - b.norm_sqr();
                let bc = b.conj();
                let mut v = Vec::with_capacity(n);
                let mut pw = ONE;
                for k in 0..n {
                    if k == 0 {
                        v.push(*b);
                    } else {
                        v.push(-w * pw);
                        pw *= bc;
                    }
                }
                let r2 = b.norm_sqr();
                let tail = if n == 0 {
                    1.0
                } else {
                    w * w * r2.powi(n as i32 - 1) / (1.0 - r2)
                };
                Some(Coefficients {
                    coeffs: v,
                    tail_sq: tail,
                })
            }
            TestFn { b, p } => Pole {
                coef: Complex64::new(test_fn_scale(*b, *p), 0.0),
                b: *b,
                power: 1,
            }
            .exact_coefficients(n),
            Pole { coef, b, power } => {
                // coef * sum_k binom(k + power - 1, power - 1) conj(b)^k z^k
                let bc = b.conj();
                let m = *power as usize;
                let mut v = Vec::with_capacity(n);
                let mut binom = 1.0f64;
                let mut pw = ONE;
                for k in 0..n {
                    if k > 0 {
                        binom *= (k + m - 1) as f64 / k as f64;
                        pw *= bc;
                    }
                    v.push(coef * pw * binom);
                }
                let r2 = b.norm_sqr();
                let tail = if m == 1 {
                    coef.norm_sqr() * r2.powi(n as i32) / (1.0 - r2)
                } else {
                    // sum the tail until the terms are negligible
                    let mut t = 0.0;
                    let mut binom = binom;
                    let mut pw2 = if n == 0 { 1.0 } else { r2.powi(n as i32 - 1) };
                    let mut k = n;
                    loop {
                        if k > 0 {
                            binom *= (k + m - 1) as f64 / k as f64;
                            pw2 *= r2;
                        }
                        let term = coef.norm_sqr() * binom * binom * pw2;
                        t += term;
                        if term <= 1e-18 * t.max(1e-300) || k > n + 200_000 {
                            break;
                        }
                        k += 1;
                    }
                    t
                };
                Some(Coefficients {
                    coeffs: v,
                    tail_sq: tail,
                })
            }
            Sum(l, r) | Difference(l, r) => {
                let a = l.exact_coefficients(n)?;
                let b = r.exact_coefficients(n)?;
                if a.tail_sq != 0.0 || b.tail_sq != 0.0 {
                    return None;
                }
                let sign = if matches!(self, Sum(..)) { 1.0 } else { -1.0 };
                Some(Coefficients {
                    coeffs: a
                        .coeffs
                        .iter()
                        .zip(&b.coeffs)
                        .map(|(x, y)| x + sign * y)
                        .collect(),
                    tail_sq: 0.0,
                })
            }
            Product(l, r) => {
                let a = l.polynomial()?;
                let b = r.polynomial()?;
                let mut v = vec![ZERO; a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        v[i + j] += x * y;
                    }
                }
                finite(v)
            }
            _ => None,
        }
    }

    /// Coefficient vector when the node is a polynomial with a known degree.
    pub fn polynomial(&self) -> Option<Vec<Complex64>> {
        use AnalyticMap::*;
        match self {
            Const(c) => Some(vec![*c]),
            Monomial(k) => {
                let mut v = vec![ZERO; *k as usize + 1];
                v[*k as usize] = ONE;
                Some(v)
            }
            Affine { alpha, beta } => Some(vec![*alpha, *beta]),
            Scale(s) => Some(vec![ZERO, *s]),
            Taylor { coeffs, tail_bound } if *tail_bound == 0.0 => Some(coeffs.clone()),
            Sum(l, r) | Difference(l, r) => {
                let a = l.polynomial()?;
                let b = r.polynomial()?;
                let sign = if matches!(self, Sum(..)) { 1.0 } else { -1.0 };
                let mut v = vec![ZERO; a.len().max(b.len())];
                for (i, x) in a.iter().enumerate() {
                    v[i] += x;
                }
                for (i, y) in b.iter().enumerate() {
                    v[i] += sign * y;
                }
                Some(v)
            }
            Product(l, r) => {
                let a = l.polynomial()?;
                let b = r.polynomial()?;
                let mut v = vec![ZERO; a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        v[i + j] += x * y;
                    }
                }
                Some(v)
            }
            _ => None,
        }
    }

    /// Closed-form value of `||f||_2^2 / (2 pi) = sum |a_n|^2` if available.
    pub fn exact_l2_sq(&self) -> Option<f64> {
        use AnalyticMap::*;
        match self {
            Mobius(_) => Some(1.0),
            Blaschke { unimodular, .. } => Some(unimodular.norm_sqr()),
            _ => self.exact_coefficients(N_MAX + 1).map(|c| c.l2_sq()),
        }
    }

    /// Taylor coefficients `a_0..a_{n_max-1}`: exact when available,
    /// otherwise recovered from circle samples.
    pub fn taylor_coefficients(&self, n_max: usize) -> Result<(Vec<Complex64>, f64)> {
        if let Some(c) = self.exact_coefficients(n_max) {
            return Ok((c.coeffs, (2.0 * PI * c.tail_sq).sqrt()));
        }
        let radius = if self.has_truncated_series() {
            0.999
        } else {
            1.0 - 1e-6
        };
        recover_coefficients(self, n_max, radius, 4 * n_max.next_power_of_two())
    }

    /// Truncate to a Taylor node with its tail bound.
    pub fn to_taylor(&self, n_max: usize) -> Result<AnalyticMap> {
        let (mut coeffs, tail) = self.taylor_coefficients(n_max)?;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        Ok(AnalyticMap::Taylor {
            coeffs,
            tail_bound: tail,
        })
    }
}

/// Recover Taylor coefficients by sampling `f` on `|z| = radius` at `samples`
/// equispaced points and inverting the discrete Fourier transform.
///
/// Returns the first `n_max` coefficients and an H^2 bound on the rest.
pub fn recover_coefficients(
    f: &AnalyticMap,
    n_max: usize,
    radius: f64,
    samples: usize,
) -> Result<(Vec<Complex64>, f64)> {
    let m = samples.max(2 * n_max).next_power_of_two();
    let mut buf: Vec<Complex64> = circle_angles(m)
        .map(|t| f.eval(Complex64::from_polar(radius, t)))
        .collect::<Result<_>>()?;
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let half = m / 2;
    let mut coeffs = Vec::with_capacity(half);
    let mut scale = 1.0 / m as f64;
    for c in buf.iter().take(half) {
        coeffs.push(c * scale);
        scale /= radius;
    }
    let last_big = coeffs.iter().rposition(|c| c.norm() > DECAY_FLOOR).unwrap_or(0);
    if last_big >= n_max {
        return Err(Error::CoefficientRecoveryUnstable { degree: n_max });
    }
    let tail: f64 = coeffs[n_max..].iter().map(|c| c.norm_sqr()).sum();
    coeffs.truncate(n_max);
    Ok((coeffs, (2.0 * PI * tail).sqrt()))
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

#[inline]
fn check_denominator(den: Complex64) -> Result<()> {
    let size = den.norm();
    if size < DENOMINATOR_FLOOR {
        return Err(Error::DegenerateDenominator { size });
    }
    Ok(())
}

/// `(1 - |b|^2)^((1 + p)/2)`
pub fn test_fn_scale(b: Complex64, p: f64) -> f64 {
    let r = b.norm();
    ((1.0 - r) * (1.0 + r)).powf(0.5 * (1.0 + p))
}

fn blaschke_derivative(zeros: &[Complex64], unimodular: Complex64) -> AnalyticMap {
    use AnalyticMap::*;
    if zeros.is_empty() {
        return Const(ZERO);
    }
    // product rule: sum_k B_k' prod_{j != k} B_j, B_k' = (1 - |z_k|^2)/(1 - conj(z_k) z)^2
    let mut terms = zeros.iter().enumerate().map(|(k, zk)| {
        let others: Vec<Complex64> = zeros
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, z)| *z)
            .collect();
        let factor = Pole {
            coef: unimodular * (1.0 - zk.norm_sqr()),
            b: *zk,
            power: 2,
        };
        if others.is_empty() {
            factor
        } else {
            Product(
                Box::new(factor),
                Box::new(Blaschke {
                    zeros: others,
                    unimodular: ONE,
                }),
            )
        }
    });
    let first = terms.next().expect("at least one zero");
    terms.fold(first, |acc, t| Sum(Box::new(acc), Box::new(t)))
}

/// How a self-map certificate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMethod {
    ExactClosedForm,
    BoundarySampling,
}

/// Evidence that a map sends the disk into itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfMapCertificate {
    #[serde(skip)]
    pub map: AnalyticMap,
    pub boundary_max_modulus: f64,
    pub sample_count: usize,
    pub method: CertificateMethod,
    /// `max |phi'| * pi / M`, the worst-case growth between samples.
    pub lipschitz_margin: f64,
}

pub const SELF_MAP_SLACK: f64 = 1e-10;

impl SelfMapCertificate {
    pub fn value_at_zero(&self) -> Complex64 {
        self.map.eval(ZERO).expect("certified self-maps evaluate at 0")
    }

    /// Certificate for `outer(inner)` where both factors are certified.
    pub fn compose(outer: &SelfMapCertificate, inner: &SelfMapCertificate) -> SelfMapCertificate {
        let method = if outer.method == CertificateMethod::ExactClosedForm
            && inner.method == CertificateMethod::ExactClosedForm
        {
            CertificateMethod::ExactClosedForm
        } else {
            CertificateMethod::BoundarySampling
        };
        SelfMapCertificate {
            map: outer.map.compose(inner),
            boundary_max_modulus: outer.boundary_max_modulus,
            sample_count: outer.sample_count.max(inner.sample_count),
            method,
            lipschitz_margin: outer.lipschitz_margin,
        }
    }
}

/// Closed-form bound on `sup |phi|` for node types whose self-map property
/// needs no sampling.
fn exact_self_map_bound(phi: &AnalyticMap) -> Option<f64> {
    use AnalyticMap::*;
    match phi {
        Const(c) if c.norm() < 1.0 => Some(c.norm()),
        Monomial(n) if *n >= 1 => Some(1.0),
        Scale(s) if s.norm() <= 1.0 => Some(s.norm()),
        Affine { alpha, beta } => {
            let bound = alpha.norm() + beta.norm();
            let degenerate = beta.norm() == 0.0 && alpha.norm() >= 1.0;
            (bound <= 1.0 && !degenerate).then_some(bound)
        }
        Mobius(b) if b.norm() < 1.0 => Some(1.0),
        Blaschke { zeros, .. } if !zeros.is_empty() && zeros.iter().all(|z| z.norm() < 1.0) => {
            Some(1.0)
        }
        Compose(outer, inner) => {
            let o = exact_self_map_bound(outer)?;
            exact_self_map_bound(inner)?;
            Some(o)
        }
        _ => None,
    }
}

/// Certify that `phi` is an analytic self-map of the disk.
///
/// Closed forms (rotations, Möbius maps, monomials, Blaschke products,
/// contractive affine maps and compositions of these) are certified exactly.
/// Otherwise the boundary modulus is sampled at `samples` points and every
/// sampled hump that could exceed 1 within the Lipschitz margin is maximized
/// locally; by the maximum principle the result bounds `sup |phi|` on the disk.
pub fn certify_self_map(phi: &AnalyticMap, samples: usize) -> Result<SelfMapCertificate> {
    if let Some(bound) = exact_self_map_bound(phi) {
        return Ok(SelfMapCertificate {
            map: phi.clone(),
            boundary_max_modulus: bound,
            sample_count: 0,
            method: CertificateMethod::ExactClosedForm,
            lipschitz_margin: 0.0,
        });
    }
    let center = phi.eval(ZERO)?.norm();
    if !(center < 1.0) {
        return Err(Error::NotSelfMap { bound: center });
    }
    let m = samples.max(16);
    let h = 2.0 * PI / m as f64;
    let moduli: Vec<f64> = circle_angles(m)
        .map(|t| phi.eval_boundary(t).map(|v| v.norm()))
        .collect::<Result<_>>()?;
    if moduli.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample);
    }
    let dphi = phi.derivative();
    let mut lip: f64 = 0.0;
    for t in circle_angles(m) {
        lip = lip.max(dphi.eval_boundary(t)?.norm());
    }
    let margin = lip * 0.5 * h;
    let mut bound = moduli.iter().cloned().fold(0.0, f64::max);
    for j in 0..m {
        let prev = moduli[(j + m - 1) % m];
        let next = moduli[(j + 1) % m];
        let v = moduli[j];
        if v >= prev && v >= next && v + margin > 1.0 + SELF_MAP_SLACK {
            let t0 = (j as f64 - 1.0) * h;
            let (_, refined) = golden_max(|t| phi.eval_boundary(t).map_or(f64::NAN, |w| w.norm()), t0, t0 + 2.0 * h);
            bound = bound.max(refined);
        }
    }
    if !(bound <= 1.0 + SELF_MAP_SLACK) {
        return Err(Error::NotSelfMap { bound });
    }
    Ok(SelfMapCertificate {
        map: phi.clone(),
        boundary_max_modulus: bound,
        sample_count: m,
        method: CertificateMethod::BoundarySampling,
        lipschitz_margin: margin,
    })
}

struct Cx(Complex64);

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.0;
        if im.is_sign_negative() {
            write!(f, "{}-{}i", re, -im)
        } else {
            write!(f, "{}+{}i", re, im)
        }
    }
}

fn list(f: &mut fmt::Formatter<'_>, items: &[Complex64]) -> fmt::Result {
    write!(f, "[")?;
    for (i, c) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{}", Cx(*c))?;
    }
    write!(f, "]")
}

/// Renders the symbol language accepted by the command-line parser.
impl fmt::Display for AnalyticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AnalyticMap::*;
        match self {
            Const(c) => write!(f, "const({})", Cx(*c)),
            Monomial(n) => write!(f, "monomial({n})"),
            Affine { alpha, beta } => write!(f, "affine({}, {})", Cx(*alpha), Cx(*beta)),
            Scale(s) => write!(f, "scale({})", Cx(*s)),
            Taylor { coeffs, tail_bound } => {
                write!(f, "taylor(")?;
                list(f, coeffs)?;
                if *tail_bound != 0.0 {
                    write!(f, ", {tail_bound}")?;
                }
                write!(f, ")")
            }
            Mobius(b) => write!(f, "mobius({})", Cx(*b)),
            Blaschke { zeros, unimodular } => {
                write!(f, "blaschke(")?;
                list(f, zeros)?;
                if *unimodular != ONE {
                    write!(f, ", {}", Cx(*unimodular))?;
                }
                write!(f, ")")
            }
            TestFn { b, p } => write!(f, "testfn({}, {p})", Cx(*b)),
            Pole { coef, b, power } => write!(f, "pole({}, {}, {power})", Cx(*coef), Cx(*b)),
            Compose(a, b) => write!(f, "compose({a}, {b})"),
            Sum(a, b) => write!(f, "sum({a}, {b})"),
            Difference(a, b) => write!(f, "diff({a}, {b})"),
            Product(a, b) => write!(f, "prod({a}, {b})"),
        }
    }
}
