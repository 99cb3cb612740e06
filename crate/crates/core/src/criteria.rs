//! Boundedness and compactness criteria for composition operators between
//! Campanato spaces, evaluated on finite grids and graded as evidence.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{AnalyticMap, SelfMapCertificate};
use crate::campanato::{check_index, star_seminorm, DiskGrid, GridPoint};
use crate::carleson::level_set;
use crate::error::{Error, Result};
use crate::geometry::{one_minus_modulus_sq, DiskPoint};
use crate::hardy::symbol_norm_sq;
use crate::quadrature::{circle_angles, golden_max};

/// Smallest fitted exponent reported as divergence.
pub const DIVERGENCE_EXPONENT: f64 = 0.1;
/// Largest RMS residual of the log-log fit accepted as divergence.
pub const FIT_RESIDUAL: f64 = 0.05;
/// Depths used by the divergence fit, at minimum.
pub const FIT_DEPTHS: usize = 6;
/// Depths over which the running maximum must be stable.
pub const STABILITY_DEPTHS: usize = 4;
/// Relative change of the running maximum still counted as stable.
pub const STABILITY_CHANGE: f64 = 0.02;
/// Default threshold separating the two halves of the case split.
pub const DEFAULT_SPLIT: f64 = 0.9;

/// `(1-|a|^2)^{1-q} / (1-|phi(a)|^2)^{1-p} * ||sigma_{phi(a)} o phi o sigma_a||_2^2`.
pub fn theta(phi: &SelfMapCertificate, a: DiskPoint, p: f64, q: f64) -> Result<f64> {
    Ok(theta_sample(phi, a, p, q)?.theta)
}

fn theta_sample(phi: &SelfMapCertificate, a: DiskPoint, p: f64, q: f64) -> Result<ThetaSample> {
    check_index(p)?;
    check_index(q)?;
    let (b, norm_sq) = symbol_norm_sq(&phi.map, a.value())?;
    let weight = a.conformal_weight().powf(1.0 - q) / one_minus_modulus_sq(b).powf(1.0 - p);
    Ok(ThetaSample {
        a,
        depth: 0,
        phi_a: b,
        theta: weight * norm_sq,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaSample {
    pub a: DiskPoint,
    pub depth: u32,
    pub phi_a: Complex64,
    pub theta: f64,
}

/// Maxima of a sampled quantity on the two sides of `|phi(a)| = s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseSplit {
    pub s: f64,
    pub inner_max: f64,
    pub outer_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionProfile {
    pub p: f64,
    pub q: f64,
    pub samples: Vec<ThetaSample>,
    pub max_theta: f64,
    pub argmax: DiskPoint,
    /// Fitted exponent `gamma` in `max_ring theta ~ (1 - r^2)^{-gamma}`.
    pub boundary_trend: Option<f64>,
    pub split: CaseSplit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    BoundedEvidence,
    UnboundedEvidence,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub max_theta: f64,
    pub divergence_exponent: Option<f64>,
    pub fit_residual: Option<f64>,
    pub notes: Vec<String>,
}

/// Least-squares line through `(x, y)`: slope and RMS residual.
fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(u, v)| (v - my - slope * (u - mx)).powi(2))
        .sum();
    (slope, (rss / n).sqrt())
}

/// Per-depth maxima of a sampled quantity; index is the grid depth.
pub fn ring_maxima(values: &[(u32, f64)]) -> Vec<f64> {
    let deepest = values.iter().map(|v| v.0).max().unwrap_or(0) as usize;
    let mut rings = vec![f64::NEG_INFINITY; deepest + 1];
    for &(d, v) in values {
        rings[d as usize] = rings[d as usize].max(v);
    }
    rings
}

/// Grade per-depth maxima: divergence is a log-log fit against
/// `1 - r_d^2` over the deepest depths, stability is the running maximum
/// over the last few depths.
pub fn grade(rings: &[f64]) -> Verdict {
    let max_theta = rings.iter().cloned().fold(0.0, f64::max);
    let mut notes = Vec::new();
    let mut exponent = None;
    let mut residual = None;

    let depths: Vec<usize> = (1..rings.len()).filter(|&d| rings[d] > 0.0).collect();
    if depths.len() >= FIT_DEPTHS {
        let tail = &depths[depths.len() - FIT_DEPTHS..];
        let x: Vec<f64> = tail
            .iter()
            .map(|&d| {
                let r = DiskGrid::radius(d as u32);
                (1.0 - r * r).ln()
            })
            .collect();
        let y: Vec<f64> = tail.iter().map(|&d| rings[d].ln()).collect();
        let (slope, rms) = fit_line(&x, &y);
        exponent = Some(-slope);
        residual = Some(rms);
    } else {
        notes.push(format!("fewer than {FIT_DEPTHS} positive depths; no divergence fit"));
    }

    if let (Some(g), Some(r)) = (exponent, residual) {
        if g >= DIVERGENCE_EXPONENT && r <= FIT_RESIDUAL {
            notes.push(format!("ring maxima grow like (1-|a|^2)^-{g:.3}"));
            return Verdict {
                outcome: Outcome::UnboundedEvidence,
                max_theta,
                divergence_exponent: exponent,
                fit_residual: residual,
                notes,
            };
        }
    }

    let mut running = Vec::with_capacity(rings.len());
    let mut acc: f64 = 0.0;
    for r in rings {
        acc = acc.max(r.max(0.0));
        running.push(acc);
    }
    let outcome = if running.len() >= STABILITY_DEPTHS {
        let last = running[running.len() - 1];
        let first = running[running.len() - STABILITY_DEPTHS];
        let change = if last == 0.0 { 0.0 } else { (last - first) / last };
        if change <= STABILITY_CHANGE {
            notes.push(format!(
                "running max changed by {:.2}% over the last {STABILITY_DEPTHS} depths",
                100.0 * change
            ));
            Outcome::BoundedEvidence
        } else {
            notes.push(format!("running max still moving ({:.2}%)", 100.0 * change));
            Outcome::Inconclusive
        }
    } else {
        notes.push("grid too shallow for a stability window".into());
        Outcome::Inconclusive
    };
    Verdict {
        outcome,
        max_theta,
        divergence_exponent: exponent,
        fit_residual: residual,
        notes,
    }
}

fn sweep<F>(grid: &DiskGrid, eval: F) -> Result<Vec<(GridPoint, f64, Complex64)>>
where
    F: Fn(DiskPoint) -> Result<(f64, Complex64)> + Sync,
{
    let points = grid.points();
    points
        .par_iter()
        .map(|g| eval(g.point).map(|(v, b)| (*g, v, b)))
        .collect()
}

fn case_split(samples: &[(f64, Complex64)], s: f64) -> CaseSplit {
    let mut split = CaseSplit {
        s,
        inner_max: 0.0,
        outer_max: 0.0,
    };
    for (v, b) in samples {
        if b.norm() <= s {
            split.inner_max = split.inner_max.max(*v);
        } else {
            split.outer_max = split.outer_max.max(*v);
        }
    }
    split
}

/// Theta over the whole grid, with its verdict.
pub fn boundedness_profile(
    phi: &SelfMapCertificate,
    p: f64,
    q: f64,
    grid: &DiskGrid,
) -> Result<(CriterionProfile, Verdict)> {
    check_index(p)?;
    check_index(q)?;
    let raw = sweep(grid, |a| {
        let s = theta_sample(phi, a, p, q)?;
        Ok((s.theta, s.phi_a))
    })?;
    let samples: Vec<ThetaSample> = raw
        .iter()
        .map(|(g, v, b)| ThetaSample {
            a: g.point,
            depth: g.depth,
            phi_a: *b,
            theta: *v,
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, DiskPoint::origin());
    for s in &samples {
        if s.theta > best.0 {
            best = (s.theta, s.a);
        }
    }
    let rings = ring_maxima(&samples.iter().map(|s| (s.depth, s.theta)).collect::<Vec<_>>());
    let verdict = grade(&rings);
    let split = case_split(&raw.iter().map(|(_, v, b)| (*v, *b)).collect::<Vec<_>>(), DEFAULT_SPLIT);
    Ok((
        CriterionProfile {
            p,
            q,
            samples,
            max_theta: best.0,
            argmax: best.1,
            boundary_trend: verdict.divergence_exponent,
            split,
        },
        verdict,
    ))
}

/// `((1-|a|^2)/(1-|phi(a)|^2))^{(3-p)/2} |phi'(a)|`.
pub fn derivative_quantity(phi: &AnalyticMap, dphi: &AnalyticMap, a: DiskPoint, p: f64) -> Result<f64> {
    let b = phi.eval(a.value())?;
    let gap = one_minus_modulus_sq(b);
    if !(gap >= 1e-12) {
        return Err(Error::NearBoundaryImage { modulus: b.norm() });
    }
    let ratio = a.conformal_weight() / gap;
    Ok(ratio.powf(0.5 * (3.0 - p)) * dphi.eval(a.value())?.norm())
}

/// `(1-|a|^2) |phi'(a)| / (1-|phi(a)|^2)`, at most 1 for self-maps.
pub fn schwarz_pick_ratio(phi: &AnalyticMap, dphi: &AnalyticMap, a: DiskPoint) -> Result<f64> {
    let b = phi.eval(a.value())?;
    Ok(a.conformal_weight() * dphi.eval(a.value())?.norm() / one_minus_modulus_sq(b))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeProfile {
    pub p: f64,
    pub max_value: f64,
    pub argmax: DiskPoint,
    pub verdict: Verdict,
}

/// Grid supremum of the derivative quantity, graded like theta.
pub fn derivative_criterion(phi: &SelfMapCertificate, p: f64, grid: &DiskGrid) -> Result<DerivativeProfile> {
    check_index(p)?;
    let dphi = phi.map.derivative();
    let raw = sweep(grid, |a| {
        Ok((derivative_quantity(&phi.map, &dphi, a, p)?, Complex64::new(0.0, 0.0)))
    })?;
    let mut best = (f64::NEG_INFINITY, DiskPoint::origin());
    for (g, v, _) in &raw {
        if *v > best.0 {
            best = (*v, g.point);
        }
    }
    let rings = ring_maxima(&raw.iter().map(|(g, v, _)| (g.depth, *v)).collect::<Vec<_>>());
    Ok(DerivativeProfile {
        p,
        max_value: best.0,
        argmax: best.1,
        verdict: grade(&rings),
    })
}

/// Whether compactness is characterized by the vanishing condition at
/// `(p, q)`, or only conjectured to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactnessRegime {
    Characterized,
    Conjectural,
}

/// Regime labels attached to every criterion report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegimeLabel {
    /// Boundedness is characterized by theta throughout `[0, 2)^2`.
    pub boundedness_characterized: bool,
    pub compactness: CompactnessRegime,
}

pub fn regime(p: f64, q: f64) -> RegimeLabel {
    let in_range = |x: f64| (0.0..2.0).contains(&x);
    let converse = in_range(p) && ((q == 1.0) || (p > 1.0 && in_range(q)));
    RegimeLabel {
        boundedness_characterized: in_range(p) && in_range(q),
        compactness: if converse {
            CompactnessRegime::Characterized
        } else {
            CompactnessRegime::Conjectural
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VanishingFlag {
    Vanishing,
    NotVanishing,
    Inconclusive,
    VacuouslyTrue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayPoint {
    pub a: DiskPoint,
    /// `1 - |phi(a)|`
    pub image_gap: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ray {
    pub angle: f64,
    pub points: Vec<RayPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingProfile {
    pub flag: VanishingFlag,
    pub boundary_sup: f64,
    pub rays: Vec<Ray>,
}

/// Boundary samples used to locate where `|phi|` reaches the circle.
pub const CONTACT_SAMPLES: usize = 4096;
/// `sup |phi|` on the circle within this of 1 counts as contact.
pub const CONTACT_TOL: f64 = 1e-9;
/// Ray radii `1 - 2^{-k}` for `k = 1..=RAY_DEPTH`.
pub const RAY_DEPTH: u32 = 14;

/// Boundary supremum of `|phi|` and the ray angles that approach it: local
/// maxima touching the circle, or `ray_count` equispaced angles when more
/// than a quarter of the circle is in contact.
pub fn contact_rays(phi: &AnalyticMap, ray_count: usize) -> Result<(f64, Vec<f64>)> {
    let m = CONTACT_SAMPLES;
    let h = 2.0 * PI / m as f64;
    let moduli: Vec<f64> = circle_angles(m)
        .map(|t| phi.eval_boundary(t).map(|w| w.norm()))
        .collect::<Result<_>>()?;
    let mut sup = moduli.iter().cloned().fold(0.0, f64::max);
    let mut peaks = Vec::new();
    for j in 0..m {
        let prev = moduli[(j + m - 1) % m];
        let next = moduli[(j + 1) % m];
        if moduli[j] >= prev && moduli[j] > next {
            let t0 = (j as f64 - 1.0) * h;
            let (t, v) = golden_max(|t| phi.eval_boundary(t).map_or(f64::NAN, |w| w.norm()), t0, t0 + 2.0 * h);
            sup = sup.max(v);
            if v >= 1.0 - CONTACT_TOL {
                peaks.push(t.rem_euclid(2.0 * PI));
            }
        }
    }
    let touching = moduli.iter().filter(|v| **v >= 1.0 - CONTACT_TOL).count();
    let n = ray_count.max(1);
    if touching * 4 > m || peaks.len() > n {
        return Ok((sup, circle_angles(n).collect()));
    }
    Ok((sup, peaks))
}

fn ray_values<F>(angles: &[f64], value: F, phi: &AnalyticMap) -> Result<Vec<Ray>>
where
    F: Fn(DiskPoint) -> Result<f64> + Sync,
{
    angles
        .par_iter()
        .map(|&angle| {
            let points = (1..=RAY_DEPTH)
                .map(|k| {
                    let a = DiskPoint::grid(Complex64::from_polar(DiskGrid::radius(k), angle))?;
                    let gap = 1.0 - phi.eval(a.value())?.norm();
                    Ok(RayPoint {
                        a,
                        image_gap: gap,
                        value: value(a)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Ray { angle, points })
        })
        .collect()
}

/// Flag a set of ray curves: vanishing when every ray ends below 5% of its
/// maximum over the deepest 3 radii, not vanishing when some ray is
/// non-decreasing over the deepest 4.
pub fn flag_rays(rays: &[Ray]) -> VanishingFlag {
    let non_decreasing = rays.iter().any(|ray| {
        let v: Vec<f64> = ray.points.iter().map(|p| p.value).collect();
        v.len() >= 4 && v[v.len() - 4..].windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9))
    });
    if non_decreasing {
        return VanishingFlag::NotVanishing;
    }
    let vanishing = rays.iter().all(|ray| {
        let v: Vec<f64> = ray.points.iter().map(|p| p.value).collect();
        let top = v.iter().cloned().fold(0.0, f64::max);
        v.len() >= 3 && v[v.len() - 3..].iter().all(|x| *x < 0.05 * top)
    });
    if vanishing {
        VanishingFlag::Vanishing
    } else {
        VanishingFlag::Inconclusive
    }
}

fn vanishing_with<F>(phi: &SelfMapCertificate, ray_count: usize, value: F) -> Result<VanishingProfile>
where
    F: Fn(DiskPoint) -> Result<f64> + Sync,
{
    let (sup, angles) = contact_rays(&phi.map, ray_count)?;
    if sup < 1.0 - CONTACT_TOL {
        return Ok(VanishingProfile {
            flag: VanishingFlag::VacuouslyTrue,
            boundary_sup: sup,
            rays: Vec::new(),
        });
    }
    let rays = ray_values(&angles, value, &phi.map)?;
    Ok(VanishingProfile {
        flag: flag_rays(&rays),
        boundary_sup: sup,
        rays,
    })
}

/// Theta along rays on which `|phi(a)| -> 1`.
pub fn vanishing_profile(phi: &SelfMapCertificate, p: f64, q: f64, ray_count: usize) -> Result<VanishingProfile> {
    check_index(p)?;
    check_index(q)?;
    vanishing_with(phi, ray_count, |a| theta(phi, a, p, q))
}

/// The derivative quantity along the same rays.
pub fn derivative_vanishing_profile(phi: &SelfMapCertificate, p: f64, ray_count: usize) -> Result<VanishingProfile> {
    check_index(p)?;
    let dphi = phi.map.derivative();
    vanishing_with(phi, ray_count, |a| derivative_quantity(&phi.map, &dphi, a, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferBound {
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
}

impl TransferBound {
    /// Both sides are grid lower bounds, so the comparison allows 5%.
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * 1.05
    }
}

/// `||f o phi||_* <= ((1+|phi(0)|)/(1-|phi(0)|))^{(1-p)/2} ||f||_*` for `p` in `[0, 1]`.
pub fn norm_transfer_bound_check(
    phi: &SelfMapCertificate,
    p: f64,
    f: &AnalyticMap,
    grid: &DiskGrid,
) -> Result<TransferBound> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::IndexOutOfRange {
            value: p,
            range: "[0, 1]",
        });
    }
    let c = phi.value_at_zero().norm();
    let constant = ((1.0 + c) / (1.0 - c)).powf(0.5 * (1.0 - p));
    let lhs = star_seminorm(&f.compose(phi), p, grid)?.value;
    let rhs = constant * star_seminorm(f, p, grid)?.value;
    Ok(TransferBound { lhs, rhs, constant })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayPoint {
    pub t: f64,
    pub value: f64,
    pub witness: Option<DiskPoint>,
}

/// For `q = 1`: `t -> sup_{|phi(a)| <= s} (1-|phi(a)|^2)^{p-1} |E(phi, a, t)|`
/// over the grid, with level sets sampled at `m` boundary nodes.
pub fn level_set_decay_curve(
    phi: &SelfMapCertificate,
    p: f64,
    s: f64,
    t_grid: &[f64],
    grid: &DiskGrid,
    m: usize,
) -> Result<Vec<DecayPoint>> {
    check_index(p)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::IndexOutOfRange { value: s, range: "(0, 1)" });
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return Err(Error::IndexOutOfRange { value: *t, range: "(0, 1)" });
    }
    let mut inside = Vec::new();
    for g in grid.points() {
        let b = phi.map.eval(g.point.value())?;
        if b.norm() <= s {
            inside.push((g.point, one_minus_modulus_sq(b).powf(p - 1.0)));
        }
    }
    t_grid
        .iter()
        .map(|&t| {
            let values: Vec<f64> = inside
                .par_iter()
                .map(|(a, w)| Ok(w * level_set(phi, *a, t, m)?.total_length))
                .collect::<Result<_>>()?;
            let mut best = DecayPoint { t, value: 0.0, witness: None };
            for (v, (a, _)) in values.iter().zip(&inside) {
                if *v > best.value {
                    best.value = *v;
                    best.witness = Some(*a);
                }
            }
            Ok(best)
        })
        .collect()
}
