//! Carleson boxes, arc unions on the circle, capacity upper bounds and the
//! fourth-moment comparison.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{AnalyticMap, SelfMapCertificate};
use crate::campanato::{star_seminorm, DiskGrid};
use crate::error::{Error, Result};
use crate::geometry::{carleson_box, mobius_raw, wrap_angle, CircleArc, DiskPoint};
use crate::hardy::{h2_norm_sq, Comparison};
use crate::quadrature::{circle_angles, pairwise_sum, GaussLegendre};

const TWO_PI: f64 = 2.0 * PI;

/// Most components the capacity estimator accepts.
pub const MAX_ARCS: usize = 64;
/// Up to this many components the covering optimum is exact.
pub const EXACT_ARCS: usize = 20;

/// Sorted, pairwise disjoint arcs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcUnion {
    pub arcs: Vec<CircleArc>,
    pub total_length: f64,
}

impl ArcUnion {
    pub fn empty() -> Self {
        Self {
            arcs: Vec::new(),
            total_length: 0.0,
        }
    }

    pub fn full() -> Self {
        Self {
            arcs: vec![CircleArc::full_circle()],
            total_length: TWO_PI,
        }
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].is_full()
    }

    /// Merge overlapping or touching arcs and sort by start angle.
    pub fn normalize(arcs: &[CircleArc]) -> Self {
        if arcs.iter().any(|a| a.is_full()) {
            return Self::full();
        }
        let mut iv: Vec<(f64, f64)> = Vec::with_capacity(arcs.len() + 1);
        for a in arcs {
            let s = a.start();
            let e = s + a.length();
            if e > TWO_PI {
                iv.push((s, TWO_PI));
                iv.push((0.0, e - TWO_PI));
            } else {
                iv.push((s, e));
            }
        }
        iv.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
        for (s, e) in iv {
            match merged.last_mut() {
                Some(last) if s <= last.1 => last.1 = last.1.max(e),
                _ => merged.push((s, e)),
            }
        }
        if merged.len() == 1 && merged[0].0 <= 0.0 && merged[0].1 >= TWO_PI {
            return Self::full();
        }
        // rejoin an arc cut at angle 0
        if merged.len() > 1 && merged[0].0 <= 0.0 && merged[merged.len() - 1].1 >= TWO_PI {
            let first = merged.remove(0);
            let last = merged.last_mut().expect("at least one interval remains");
            last.1 = TWO_PI + first.1;
        }
        let arcs: Vec<CircleArc> = merged
            .iter()
            .filter(|(s, e)| e > s)
            .map(|&(s, e)| CircleArc {
                center_angle: wrap_angle(0.5 * (s + e)),
                half_length: 0.5 * (e - s),
            })
            .collect();
        let lengths: Vec<f64> = arcs.iter().map(|a| a.length()).collect();
        let mut out = Self {
            total_length: pairwise_sum(&lengths).min(TWO_PI),
            arcs,
        };
        out.arcs.sort_by(|x, y| x.start().total_cmp(&y.start()));
        out
    }

    pub fn union(&self, other: &ArcUnion) -> Self {
        let mut all = self.arcs.clone();
        all.extend_from_slice(&other.arcs);
        Self::normalize(&all)
    }
}

/// `min sum_j |I_j|^p` over coverings of `E` whose arcs are merged runs of
/// consecutive components of `E`. Exact within that class for up to 20
/// components, greedy gap merging up to 64.
pub fn hausdorff_capacity_upper(e: &ArcUnion, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::IndexOutOfRange {
            value: p,
            range: "(0, 1]",
        });
    }
    let k = e.arcs.len();
    if k == 0 {
        return Ok(0.0);
    }
    let whole = TWO_PI.powf(p);
    if e.is_full() {
        return Ok(whole);
    }
    if k > MAX_ARCS {
        return Err(Error::TooManyArcs { count: k });
    }
    let lengths: Vec<f64> = e.arcs.iter().map(|a| a.length()).collect();
    let gaps: Vec<f64> = (0..k)
        .map(|i| {
            let end = e.arcs[i].start() + lengths[i];
            let next = e.arcs[(i + 1) % k].start();
            let g = (next - end).rem_euclid(TWO_PI);
            if k == 1 {
                TWO_PI - lengths[0]
            } else {
                g
            }
        })
        .collect();
    let best = if k <= EXACT_ARCS {
        exact_cover(&lengths, &gaps, p)
    } else {
        greedy_cover(&lengths, &gaps, p)
    };
    Ok(best.min(whole))
}

/// Try every gap as the one left uncovered, then partition the resulting
/// line of components optimally.
fn exact_cover(lengths: &[f64], gaps: &[f64], p: f64) -> f64 {
    let k = lengths.len();
    let mut best = f64::INFINITY;
    for cut in 0..k {
        let order: Vec<usize> = (1..=k).map(|i| (cut + i) % k).collect();
        let mut dp = vec![f64::INFINITY; k + 1];
        dp[0] = 0.0;
        for j in 1..=k {
            // span of components order[i..j]
            let mut span = 0.0;
            for i in (0..j).rev() {
                span += lengths[order[i]];
                if i < j - 1 {
                    span += gaps[order[i]];
                }
                let cand = dp[i] + span.powf(p);
                if cand < dp[j] {
                    dp[j] = cand;
                }
            }
        }
        best = best.min(dp[k]);
    }
    best
}

fn greedy_cover(lengths: &[f64], gaps: &[f64], p: f64) -> f64 {
    // groups of consecutive components: (span, gap to the next group)
    let mut groups: Vec<(f64, f64)> = lengths.iter().zip(gaps).map(|(l, g)| (*l, *g)).collect();
    loop {
        let n = groups.len();
        if n <= 1 {
            break;
        }
        let mut best_gain = 0.0;
        let mut best_i = None;
        for i in 0..n {
            let j = (i + 1) % n;
            let merged = groups[i].0 + groups[i].1 + groups[j].0;
            let gain = groups[i].0.powf(p) + groups[j].0.powf(p) - merged.powf(p);
            if gain > best_gain + 1e-15 {
                best_gain = gain;
                best_i = Some(i);
            }
        }
        let Some(i) = best_i else { break };
        let j = (i + 1) % n;
        let merged = (groups[i].0 + groups[i].1 + groups[j].0, groups[j].1);
        groups[i] = merged;
        groups.remove(j);
    }
    groups.iter().map(|(s, _)| s.powf(p)).sum()
}

/// Arcs where `g(theta) > t`, found by thresholding `m` equispaced samples
/// and refining each crossing by bisection to `1e-10` radians.
pub fn superlevel_arcs<G>(g: G, t: f64, m: usize) -> Result<ArcUnion>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    let h = TWO_PI / m as f64;
    let angles: Vec<f64> = circle_angles(m).collect();
    let values: Vec<f64> = angles.par_iter().map(|&th| g(th)).collect::<Result<_>>()?;
    let above: Vec<bool> = values.iter().map(|v| *v > t).collect();
    if above.iter().all(|x| *x) {
        return Ok(ArcUnion::full());
    }
    if !above.iter().any(|x| *x) {
        return Ok(ArcUnion::empty());
    }
    let crossing = |lo: f64, hi: f64, rising: bool| -> Result<f64> {
        // invariant: g(lo) is on the "before" side, g(hi) on the "after" side
        let (mut lo, mut hi) = (lo, hi);
        while hi - lo > 1e-10 {
            let mid = 0.5 * (lo + hi);
            let up = g(mid)? > t;
            if up == rising {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };
    let first_below = above.iter().position(|x| !*x).expect("some node is below");
    let mut arcs = Vec::new();
    let mut j = 0;
    while j < m {
        let idx = (first_below + j) % m;
        if !above[idx] {
            j += 1;
            continue;
        }
        let run_start = first_below + j;
        let mut run_end = run_start;
        while above[(run_end + 1) % m] {
            run_end += 1;
        }
        let left = crossing((run_start as f64 - 1.0) * h, run_start as f64 * h, true)?;
        let right = crossing(run_end as f64 * h, (run_end as f64 + 1.0) * h, false)?;
        if right > left {
            arcs.push(CircleArc::from_start(left, (right - left).min(TWO_PI))?);
        }
        j = run_end - first_below + 1;
    }
    Ok(ArcUnion::normalize(&arcs))
}

/// `E(phi, a, t) = {xi : |sigma_{phi(a)} o phi o sigma_a (xi)| > t}`.
pub fn level_set(phi: &SelfMapCertificate, a: DiskPoint, t: f64, m: usize) -> Result<ArcUnion> {
    let b = phi.map.eval(a.value())?;
    let av = a.value();
    superlevel_arcs(
        |th| {
            let xi = Complex64::from_polar(1.0, th);
            let inner = mobius_raw(av, xi)?;
            Ok(mobius_raw(b, phi.map.eval(inner)?)?.norm())
        },
        t,
        m,
    )
}

/// Largest `|I|^{-p} mu(S(I))` over the tested arcs, for
/// `d mu = |f'|^2 (1 - |z|^2) dm`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarlesonMeasureEstimate {
    pub p: f64,
    pub value: f64,
    pub witness_arc: CircleArc,
    pub dyadic_depth: u32,
}

/// Dyadic arcs of levels `0..=depth`, each level with its half-shifted copy.
pub fn dyadic_arcs(depth: u32) -> Vec<CircleArc> {
    let mut out = vec![CircleArc::full_circle()];
    for level in 1..=depth {
        let n = 1usize << level;
        let len = TWO_PI / n as f64;
        for shift in [0.0, 0.5] {
            for k in 0..n {
                out.push(CircleArc::from_start((k as f64 + shift) * len, len).expect("dyadic arc"));
            }
        }
    }
    out
}

/// `mu(S(I))` by a tensor Gauss-Legendre rule on the box.
pub fn box_measure(df: &AnalyticMap, arc: CircleArc) -> Result<f64> {
    thread_local! {
        static RADIAL: GaussLegendre = GaussLegendre::new(24);
        static ANGULAR: GaussLegendre = GaussLegendre::new(16);
    }
    let b = carleson_box(arc);
    let panels = (arc.length() / (PI / 8.0)).ceil().max(1.0) as usize;
    let plen = arc.length() / panels as f64;
    let start = arc.center_angle - arc.half_length;
    RADIAL.with(|radial| {
        ANGULAR.with(|angular| {
            let mut terms = Vec::with_capacity(panels * 16 * 24);
            for k in 0..panels {
                let a0 = start + k as f64 * plen;
                for (th, wt) in angular.on_interval(a0, a0 + plen) {
                    for (r, wr) in radial.on_interval(b.inner_radius, 1.0) {
                        let v = df.eval(Complex64::from_polar(r, th))?.norm_sqr();
                        terms.push(wt * wr * v * (1.0 - r * r) * r);
                    }
                }
            }
            let total = pairwise_sum(&terms);
            if !total.is_finite() {
                return Err(Error::NonFiniteSample);
            }
            Ok(total)
        })
    })
}

pub fn carleson_norm(f: &AnalyticMap, p: f64, depth: u32) -> Result<CarlesonMeasureEstimate> {
    if !(p > 0.0 && p <= 3.0) {
        return Err(Error::IndexOutOfRange {
            value: p,
            range: "(0, 3]",
        });
    }
    if depth > 12 {
        return Err(Error::IndexOutOfRange {
            value: depth as f64,
            range: "depth <= 12",
        });
    }
    let df = f.derivative();
    let arcs = dyadic_arcs(depth);
    let values: Vec<f64> = arcs
        .par_iter()
        .map(|arc| Ok(box_measure(&df, *arc)? / arc.length().powf(p)))
        .collect::<Result<_>>()?;
    let mut best = (0.0, arcs[0]);
    for (v, arc) in values.iter().zip(&arcs) {
        if *v > best.0 {
            best = (*v, *arc);
        }
    }
    Ok(CarlesonMeasureEstimate {
        p,
        value: best.0,
        witness_arc: best.1,
        dyadic_depth: depth,
    })
}

/// Which right-hand side the fourth-moment comparison used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentBranch {
    /// `||f||_*^2 ||f||_2^2`, for `p >= 1`.
    Hardy,
    /// `||f||_*^2 int_0^inf t H^p({|f| > t}) dt`, for `p < 1`.
    Capacity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourthMoment {
    pub lhs: f64,
    pub rhs: f64,
    pub branch: MomentBranch,
    pub star_seminorm: f64,
}

impl FourthMoment {
    pub fn ratio(&self) -> f64 {
        Comparison {
            lhs: self.lhs,
            rhs: self.rhs,
        }
        .ratio()
    }
}

/// `int_T |f|^4` by the trapezoid rule, doubled until stable.
pub fn boundary_fourth_moment(f: &AnalyticMap, m: usize) -> Result<f64> {
    let rule = |m: usize| -> Result<f64> {
        let v: Vec<f64> = circle_angles(m)
            .map(|t| f.eval_boundary(t).map(|z| z.norm_sqr().powi(2)))
            .collect::<Result<_>>()?;
        Ok(pairwise_sum(&v) * TWO_PI / m as f64)
    };
    let mut m = m.max(64);
    let mut prev = rule(m)?;
    for _ in 0..8 {
        m *= 2;
        let next = rule(m)?;
        let change = (next - prev).abs() / next.abs().max(1e-300);
        if change <= 1e-12 {
            return Ok(next);
        }
        prev = next;
        if m >= 1 << 20 {
            return Err(Error::QuadratureNonConvergent {
                what: "fourth moment",
                change,
            });
        }
    }
    Ok(prev)
}

/// Levels `0` and 64 log-spaced values from `top * 1e-3` to `top`.
pub fn moment_levels(top: f64) -> Vec<f64> {
    let mut t = vec![0.0];
    let lo = (top * 1e-3).ln();
    let hi = top.ln();
    t.extend((0..64).map(|k| (lo + (hi - lo) * k as f64 / 63.0).exp()));
    t
}

/// `int_T |f|^4` against the Campanato-weighted right-hand side.
pub fn fourth_moment_check(
    f: &AnalyticMap,
    p: f64,
    grid: &DiskGrid,
    circle_nodes: usize,
) -> Result<FourthMoment> {
    if !(p > 0.0 && p < 2.0) {
        return Err(Error::IndexOutOfRange {
            value: p,
            range: "(0, 2)",
        });
    }
    let f0 = f.eval(Complex64::new(0.0, 0.0))?.norm();
    if f0 > 1e-12 {
        return Err(Error::PreconditionViolated(format!("need f(0) = 0, got |f(0)| = {f0:e}")));
    }
    let branch = if p >= 1.0 {
        MomentBranch::Hardy
    } else {
        MomentBranch::Capacity
    };
    let lhs = boundary_fourth_moment(f, circle_nodes)?;
    let star = star_seminorm(f, p, grid)?.value;
    if star == 0.0 {
        return Ok(FourthMoment {
            lhs,
            rhs: 0.0,
            branch,
            star_seminorm: 0.0,
        });
    }
    let rhs = match branch {
        MomentBranch::Hardy => star * star * h2_norm_sq(f)?,
        MomentBranch::Capacity => {
            let top = circle_angles(circle_nodes)
                .map(|t| f.eval_boundary(t).map(|z| z.norm()))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let levels = moment_levels(top);
            let integrand: Vec<f64> = levels
                .par_iter()
                .map(|&t| {
                    if t == 0.0 {
                        return Ok(0.0);
                    }
                    let set = superlevel_arcs(|th| Ok(f.eval_boundary(th)?.norm()), t, circle_nodes)?;
                    Ok(t * hausdorff_capacity_upper(&set, p)?)
                })
                .collect::<Result<_>>()?;
            let pieces: Vec<f64> = levels
                .windows(2)
                .zip(integrand.windows(2))
                .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
                .collect();
            star * star * pairwise_sum(&pieces)
        }
    };
    Ok(FourthMoment {
        lhs,
        rhs,
        branch,
        star_seminorm: star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::certify_self_map;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn arc(start: f64, len: f64) -> CircleArc {
        CircleArc::from_start(start, len).unwrap()
    }

    #[test]
    fn capacity_examples() {
        let single = ArcUnion::normalize(&[arc(1.0, 0.7)]);
        for p in [0.3, 0.5, 1.0] {
            assert_relative_eq!(hausdorff_capacity_upper(&single, p).unwrap(), 0.7f64.powf(p), max_relative = 1e-12);
        }
        assert_relative_eq!(hausdorff_capacity_upper(&ArcUnion::full(), 1.0).unwrap(), TWO_PI, max_relative = 1e-15);
        let two = ArcUnion::normalize(&[arc(0.0, 0.1), arc(1.1, 0.1)]);
        assert_relative_eq!(hausdorff_capacity_upper(&two, 1.0).unwrap(), 0.2, max_relative = 1e-12);
        assert_eq!(hausdorff_capacity_upper(&ArcUnion::empty(), 0.5).unwrap(), 0.0);
    }

    #[test]
    fn small_exponents_prefer_merging_close_arcs() {
        let two = ArcUnion::normalize(&[arc(0.0, 0.1), arc(0.11, 0.1)]);
        let p = 0.2;
        let merged = 0.21f64.powf(p);
        assert_relative_eq!(hausdorff_capacity_upper(&two, p).unwrap(), merged, max_relative = 1e-12);
    }

    #[test]
    fn too_many_arcs() {
        let arcs: Vec<CircleArc> = (0..70).map(|k| arc(k as f64 * TWO_PI / 70.0, 0.01)).collect();
        let e = ArcUnion::normalize(&arcs);
        assert_eq!(hausdorff_capacity_upper(&e, 0.5), Err(Error::TooManyArcs { count: 70 }));
    }

    #[test]
    fn normalization_merges_and_wraps() {
        let u = ArcUnion::normalize(&[arc(5.8, 0.4), arc(0.1, 0.3), arc(0.2, 0.4)]);
        assert_eq!(u.arcs.len(), 2);
        assert_relative_eq!(u.total_length, 0.4 + 0.5, max_relative = 1e-12);
        let again = ArcUnion::normalize(&u.arcs);
        assert_eq!(again, u);
        let wrap = ArcUnion::normalize(&[arc(TWO_PI - 0.2, 0.4), arc(0.1, 0.2)]);
        assert_eq!(wrap.arcs.len(), 1);
        assert_relative_eq!(wrap.total_length, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn level_set_examples() {
        let k = certify_self_map(&AnalyticMap::Const(c(0.4, 0.0)), 64).unwrap();
        assert_eq!(level_set(&k, DiskPoint::origin(), 0.2, 1024).unwrap(), ArcUnion::empty());
        let id = certify_self_map(&AnalyticMap::identity(), 64).unwrap();
        assert!(level_set(&id, DiskPoint::origin(), 0.99, 1024).unwrap().is_full());
        let half = certify_self_map(&AnalyticMap::affine(c(0.5, 0.0), c(0.5, 0.0)), 256).unwrap();
        let e = level_set(&half, DiskPoint::origin(), 0.9, 8192).unwrap();
        assert_eq!(e.arcs.len(), 1);
        let a = e.arcs[0];
        // sigma_0(xi) = -xi, so the set sits opposite the contact point
        assert!(a.contains_angle(PI), "{a:?}");
        for end in [a.center_angle - a.half_length, a.center_angle + a.half_length] {
            let w = (ONE - Complex64::from_polar(1.0, end)) / 2.0;
            let v = mobius_raw(c(0.5, 0.0), w).unwrap().norm();
            assert!((v - 0.9).abs() < 1e-9);
        }
    }

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn carleson_norm_examples() {
        let k = carleson_norm(&AnalyticMap::Const(c(3.0, 0.0)), 1.0, 4).unwrap();
        assert_eq!(k.value, 0.0);
        let id = AnalyticMap::identity();
        let full = box_measure(&id.derivative(), CircleArc::full_circle()).unwrap();
        assert_relative_eq!(full, PI / 2.0, max_relative = 1e-13);
        let est = carleson_norm(&id, 1.0, 6).unwrap();
        assert!(est.value >= 0.25 - 1e-14);
        let f = AnalyticMap::TestFn { b: c(0.3, 0.6), p: 1.0 };
        let g = f.scaled(c(0.0, 2.0));
        let a = carleson_norm(&f, 0.5, 5).unwrap().value;
        let b = carleson_norm(&g, 0.5, 5).unwrap().value;
        assert_relative_eq!(b, 4.0 * a, max_relative = 1e-10);
    }

    #[test]
    fn dyadic_boxes_tile_the_outer_annulus() {
        let f = AnalyticMap::taylor(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.7), c(0.3, 0.0)]).unwrap();
        let df = f.derivative();
        for d in [1u32, 3, 5] {
            let n = 1usize << d;
            let len = TWO_PI / n as f64;
            let tiles: f64 = (0..n).map(|k| box_measure(&df, arc(k as f64 * len, len)).unwrap()).sum();
            let inner = 1.0 - len / TWO_PI;
            let gl = GaussLegendre::new(64);
            let annulus = gl.integrate(inner, 1.0, |r| {
                let ring = crate::quadrature::trapezoid_circle(256, |t| df.eval(Complex64::from_polar(r, t)).unwrap().norm_sqr());
                ring * (1.0 - r * r) * r
            });
            assert!(tiles >= annulus - 1e-8, "depth {d}: {tiles} < {annulus}");
        }
    }

    #[test]
    fn fourth_moment_examples() {
        let grid = DiskGrid::new(8, 16, 32).unwrap();
        let zero = fourth_moment_check(&AnalyticMap::Const(c(0.0, 0.0)), 1.0, &grid, 1024).unwrap();
        assert_eq!((zero.lhs, zero.rhs), (0.0, 0.0));
        let id = fourth_moment_check(&AnalyticMap::identity(), 1.0, &grid, 1024).unwrap();
        assert_relative_eq!(id.lhs, TWO_PI, max_relative = 1e-12);
        assert_relative_eq!(id.rhs, TWO_PI * TWO_PI, max_relative = 1e-10);
        assert_relative_eq!(id.ratio(), 1.0 / TWO_PI, max_relative = 1e-10);
        let sq = AnalyticMap::Monomial(2);
        let r1 = fourth_moment_check(&sq, 1.5, &grid, 1024).unwrap().ratio();
        let r2 = fourth_moment_check(&sq.scaled(c(2.0, 0.0)), 1.5, &grid, 1024).unwrap().ratio();
        assert_relative_eq!(r1, r2, max_relative = 1e-10);
        assert!(fourth_moment_check(&AnalyticMap::Const(ONE), 1.0, &grid, 1024).is_err());
        let cap = fourth_moment_check(&AnalyticMap::identity(), 0.5, &grid, 1024).unwrap();
        assert_eq!(cap.branch, MomentBranch::Capacity);
        assert!(cap.rhs > 0.0 && cap.ratio().is_finite());
    }

    fn arcs_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
        proptest::collection::vec((0.0f64..TWO_PI, 0.001f64..0.4), 1..12)
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(raw in arcs_strategy()) {
            let arcs: Vec<CircleArc> = raw.iter().map(|&(s, l)| arc(s, l)).collect();
            let u = ArcUnion::normalize(&arcs);
            let v = ArcUnion::normalize(&u.arcs);
            prop_assert_eq!(u.arcs.len(), v.arcs.len());
            prop_assert!((u.total_length - v.total_length).abs() <= 1e-12);
            prop_assert!(u.total_length <= TWO_PI + 1e-12);
        }

        #[test]
        fn capacity_is_monotone(raw in arcs_strategy(), extra in arcs_strategy(), p in 0.05f64..1.0) {
            let small: Vec<CircleArc> = raw.iter().map(|&(s, l)| arc(s, l)).collect();
            let mut big = small.clone();
            big.extend(extra.iter().map(|&(s, l)| arc(s, l)));
            let e = ArcUnion::normalize(&small);
            let f = ArcUnion::normalize(&big);
            let ce = hausdorff_capacity_upper(&e, p).unwrap();
            let cf = hausdorff_capacity_upper(&f, p).unwrap();
            prop_assert!(ce <= cf + 1e-12, "{} > {}", ce, cf);
        }
    }
}
