//! Campanato seminorms: the Möbius-invariant form, the arc-oscillation form,
//! the classification of the scale, the uniformly bounded test family and
//! the derivative growth functional.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{test_fn_scale, AnalyticMap};
use crate::error::{Error, Result};
use crate::geometry::{one_minus_modulus_sq, DiskPoint};
use crate::hardy::{pullback_integral, singular_foci};
use crate::quadrature::circle_angles;

/// Largest test-function parameter whose Taylor tail fits the truncation budget.
pub const TEST_FN_BUDGET: f64 = 0.97;

/// Reject indices outside `[0, 2)`, the range the criteria are stated for.
pub fn check_index(p: f64) -> Result<f64> {
    if !(0.0..2.0).contains(&p) {
        return Err(Error::IndexOutOfRange {
            value: p,
            range: "[0, 2)",
        });
    }
    Ok(p)
}

/// Which classical space `CA_p` coincides with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "space")]
pub enum SpaceLabel {
    Hardy,
    Morrey,
    Bmoa,
    /// Analytic Lipschitz space of order `alpha = (p - 1) / 2`.
    Lipschitz { alpha: f64 },
    Constants,
}

pub fn classify_space(p: f64) -> SpaceLabel {
    if p <= 0.0 {
        SpaceLabel::Hardy
    } else if p < 1.0 {
        SpaceLabel::Morrey
    } else if p == 1.0 {
        SpaceLabel::Bmoa
    } else if p <= 3.0 {
        SpaceLabel::Lipschitz {
            alpha: 0.5 * (p - 1.0),
        }
    } else {
        SpaceLabel::Constants
    }
}

/// Geometric-radii grid `r_k = 1 - 2^{-k}`, `k = 0..=k_sup`, with the angular
/// count doubling toward the circle up to a cap. Depth 0 is the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskGrid {
    pub k_sup: u32,
    pub base_angles: usize,
    pub max_angles: usize,
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self {
            k_sup: 14,
            base_angles: 64,
            max_angles: 256,
        }
    }
}

/// One grid node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub depth: u32,
    pub point: DiskPoint,
}

impl DiskGrid {
    pub fn new(k_sup: u32, base_angles: usize, max_angles: usize) -> Result<Self> {
        if k_sup > 14 {
            return Err(Error::IndexOutOfRange {
                value: k_sup as f64,
                range: "k_sup <= 14",
            });
        }
        if base_angles == 0 || max_angles < base_angles {
            return Err(Error::PreconditionViolated(
                "angle counts must satisfy 0 < base_angles <= max_angles".into(),
            ));
        }
        Ok(Self {
            k_sup,
            base_angles,
            max_angles,
        })
    }

    pub fn radius(depth: u32) -> f64 {
        1.0 - 0.5f64.powi(depth as i32)
    }

    /// Angles at `depth`: `base_angles` up to depth 4, doubling afterwards.
    pub fn angles_at(&self, depth: u32) -> usize {
        if depth == 0 {
            return 1;
        }
        let boost = 1usize << depth.saturating_sub(4).min(20);
        (self.base_angles * boost).min(self.max_angles)
    }

    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for depth in 0..=self.k_sup {
            let r = Self::radius(depth);
            for t in circle_angles(self.angles_at(depth)) {
                let point = DiskPoint::grid(Complex64::from_polar(r, t))
                    .expect("grid radii stay below 1 - 2^-14");
                out.push(GridPoint { depth, point });
            }
        }
        out
    }
}

/// Grid supremum with the node that attains it. A lower bound for the true
/// supremum over the disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupEstimate {
    pub value: f64,
    pub argmax: DiskPoint,
}

/// Maximum of `objective` over the grid; ties resolve to the first node.
pub fn grid_max<F>(grid: &DiskGrid, objective: F) -> Result<SupEstimate>
where
    F: Fn(DiskPoint) -> Result<f64> + Sync,
{
    let points = grid.points();
    let values: Vec<Result<f64>> = points.par_iter().map(|g| objective(g.point)).collect();
    let mut best = SupEstimate {
        value: f64::NEG_INFINITY,
        argmax: DiskPoint::origin(),
    };
    for (g, v) in points.iter().zip(values) {
        let v = v?;
        if v > best.value {
            best = SupEstimate {
                value: v,
                argmax: g.point,
            };
        }
    }
    Ok(best)
}

/// `||f o sigma_a - f(a)||_2^2`.
pub fn oscillation_sq(f: &AnalyticMap, a: DiskPoint) -> Result<f64> {
    let fa = f.eval(a.value())?;
    let foci = singular_foci(f);
    pullback_integral(
        |eta| Ok((f.eval(eta)? - fa).norm_sqr()),
        a.value(),
        &foci,
        "Mobius oscillation",
    )
}

/// `(1 - |a|^2)^((1 - p)/2) ||f o sigma_a - f(a)||_2` at one point.
pub fn star_objective(f: &AnalyticMap, p: f64, a: DiskPoint) -> Result<f64> {
    let w = a.conformal_weight().powf(0.5 * (1.0 - p));
    Ok(w * oscillation_sq(f, a)?.sqrt())
}

/// Grid maximum of `(1 - |a|^2)^((1 - p)/2) ||f o sigma_a - f(a)||_2`.
pub fn star_seminorm(f: &AnalyticMap, p: f64, grid: &DiskGrid) -> Result<SupEstimate> {
    check_index(p)?;
    grid_max(grid, |a| star_objective(f, p, a))
}

/// Dyadic arc oscillation `max_I sqrt(|I|^{-p} int_I |f - f_I|^2)`, over
/// levels `0..=arc_levels` with half-shifted copies, from `circle_nodes`
/// boundary samples. Each sample stands for a cell of width `2 pi / M`, and
/// arcs are unions of whole cells.
pub fn arc_seminorm(f: &AnalyticMap, p: f64, arc_levels: u32, circle_nodes: usize) -> Result<f64> {
    check_index(p)?;
    let m = circle_nodes.next_power_of_two();
    if (m >> arc_levels) < 4 {
        return Err(Error::PreconditionViolated(format!(
            "{m} boundary samples leave fewer than 4 per arc at level {arc_levels}"
        )));
    }
    let samples: Vec<Complex64> = circle_angles(m)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|t| f.eval_boundary(*t))
        .collect::<Result<_>>()?;
    let h = 2.0 * PI / m as f64;
    let mut best: f64 = 0.0;
    for level in 0..=arc_levels {
        let n = m >> level;
        let len = n as f64 * h;
        let offsets: &[usize] = if level == 0 { &[0] } else { &[0, n / 2] };
        for &off in offsets {
            for k in 0..(1usize << level) {
                let start = off + k * n;
                let cell = |j: usize| samples[(start + j) % m];
                // centered on the first sample so constants give exactly zero
                let base = cell(0);
                let mean = base + (0..n).map(|j| cell(j) - base).sum::<Complex64>() / n as f64;
                let dev: f64 = (0..n).map(|j| (cell(j) - mean).norm_sqr()).sum::<f64>() * h;
                best = best.max((dev / len.powf(p)).sqrt());
            }
        }
    }
    Ok(best)
}

/// `f_b(z) = (1 - |b|^2)^((1 + p)/2) / (1 - conj(b) z)`.
pub fn test_function(b: DiskPoint, p: f64) -> Result<AnalyticMap> {
    let modulus = b.modulus();
    if modulus > TEST_FN_BUDGET + 1e-12 {
        return Err(Error::TruncationBudgetExceeded { modulus });
    }
    Ok(AnalyticMap::TestFn { b: b.value(), p })
}

/// `max_{|z| <= rho} |f_b(z)| = (1 - |b|^2)^((1+p)/2) / (1 - rho |b|)`.
pub fn test_function_max_on_disk(b: DiskPoint, p: f64, rho: f64) -> f64 {
    test_fn_scale(b.value(), p) / (1.0 - rho * b.modulus())
}

/// Grid maximum of `(1 - |a|^2)^((3 - p)/2) |f'(a)|`.
pub fn derivative_growth(f: &AnalyticMap, p: f64, grid: &DiskGrid) -> Result<SupEstimate> {
    check_index(p)?;
    let df = f.derivative();
    grid_max(grid, |a| {
        Ok(one_minus_modulus_sq(a.value()).powf(0.5 * (3.0 - p)) * df.eval(a.value())?.norm())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn coarse() -> DiskGrid {
        DiskGrid::new(8, 16, 32).unwrap()
    }

    #[test]
    fn classification_table() {
        assert_eq!(classify_space(-1.0), SpaceLabel::Hardy);
        assert_eq!(classify_space(0.0), SpaceLabel::Hardy);
        assert_eq!(classify_space(0.5), SpaceLabel::Morrey);
        assert_eq!(classify_space(1.0), SpaceLabel::Bmoa);
        assert_eq!(classify_space(2.0), SpaceLabel::Lipschitz { alpha: 0.5 });
        assert_eq!(classify_space(3.0), SpaceLabel::Lipschitz { alpha: 1.0 });
        assert_eq!(classify_space(4.0), SpaceLabel::Constants);
    }

    #[test]
    fn grid_shape() {
        let g = DiskGrid::default();
        let pts = g.points();
        assert_eq!(pts[0].point, DiskPoint::origin());
        let deepest = pts.iter().map(|p| p.point.modulus()).fold(0.0, f64::max);
        assert!(deepest <= 1.0 - 2f64.powi(-14) + 1e-16);
        assert_eq!(g.angles_at(1), 64);
        assert_eq!(g.angles_at(5), 128);
        assert_eq!(g.angles_at(14), 256);
        assert!(DiskGrid::new(15, 64, 256).is_err());
    }

    #[test]
    fn constants_have_zero_seminorms() {
        let f = AnalyticMap::Const(c(0.3, -2.0));
        assert_eq!(star_seminorm(&f, 0.5, &coarse()).unwrap().value, 0.0);
        assert_eq!(arc_seminorm(&f, 0.5, 6, 1024).unwrap(), 0.0);
        assert_eq!(derivative_growth(&f, 0.5, &coarse()).unwrap().value, 0.0);
    }

    #[test]
    fn identity_star_seminorm_is_attained_at_origin() {
        let id = AnalyticMap::identity();
        for p in [0.0, 0.5, 1.0, 1.5] {
            let s = star_seminorm(&id, p, &coarse()).unwrap();
            assert_relative_eq!(s.value, (2.0 * PI).sqrt(), max_relative = 1e-12);
            assert_eq!(s.argmax, DiskPoint::origin());
        }
    }

    #[test]
    fn identity_oscillation_closed_form() {
        // ||sigma_a - a||^2 = 2 pi (1 - |a|^2)
        for a in [c(0.5, 0.0), c(-0.3, 0.8), c(0.0, 0.999)] {
            let a = DiskPoint::new(a).unwrap();
            let v = oscillation_sq(&AnalyticMap::identity(), a).unwrap();
            assert_relative_eq!(v, 2.0 * PI * a.conformal_weight(), max_relative = 1e-10);
        }
    }

    #[test]
    fn identity_arc_seminorm_full_circle() {
        let v = arc_seminorm(&AnalyticMap::identity(), 0.0, 0, 1024).unwrap();
        assert_relative_eq!(v, (2.0 * PI).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn scaling_is_linear() {
        let f = AnalyticMap::TestFn { b: c(0.6, 0.2), p: 0.5 };
        let g = f.scaled(c(-2.0, 1.5));
        let a = star_seminorm(&f, 0.5, &coarse()).unwrap().value;
        let b = star_seminorm(&g, 0.5, &coarse()).unwrap().value;
        assert_relative_eq!(b, 2.5 * a, max_relative = 1e-12);
    }

    #[test]
    fn test_function_examples() {
        let one = test_function(DiskPoint::origin(), 1.3).unwrap();
        assert_eq!(one.eval(c(0.4, 0.1)).unwrap(), c(1.0, 0.0));
        assert!(matches!(
            test_function(DiskPoint::new(c(0.98, 0.0)).unwrap(), 1.0),
            Err(Error::TruncationBudgetExceeded { .. })
        ));
        let h = crate::hardy::h2_norm(&test_function(DiskPoint::new(c(0.5, 0.0)).unwrap(), 1.0).unwrap());
        assert_relative_eq!(h.unwrap(), (1.5 * PI).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn test_functions_decay_on_compact_sets() {
        let mut prev = f64::INFINITY;
        for r in [0.5, 0.8, 0.9, 0.95, 0.97] {
            let b = DiskPoint::new(c(r, 0.0)).unwrap();
            let bound = test_function_max_on_disk(b, 1.0, 0.5);
            let f = test_function(b, 1.0).unwrap();
            let sampled = circle_angles(64)
                .map(|t| f.eval(Complex64::from_polar(0.5, t)).unwrap().norm())
                .fold(0.0, f64::max);
            assert_relative_eq!(sampled, bound, max_relative = 1e-12);
            assert!(bound < prev);
            prev = bound;
        }
    }

    #[test]
    fn derivative_growth_identity() {
        let v = derivative_growth(&AnalyticMap::identity(), 1.0, &coarse()).unwrap();
        assert_eq!(v.value, 1.0);
        assert_eq!(v.argmax, DiskPoint::origin());
    }

    #[test]
    fn derivative_is_dominated_by_oscillation() {
        let maps = [
            AnalyticMap::Monomial(3),
            AnalyticMap::TestFn { b: c(0.7, 0.2), p: 1.0 },
            AnalyticMap::taylor(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)]).unwrap(),
        ];
        for f in maps {
            let df = f.derivative();
            for g in coarse().points() {
                let a = g.point;
                let lhs = a.conformal_weight() * df.eval(a.value()).unwrap().norm();
                let rhs = oscillation_sq(&f, a).unwrap().sqrt() / (2.0 * PI).sqrt();
                assert!(lhs <= rhs + 1e-10, "{f} at {:?}: {lhs} > {rhs}", a);
            }
        }
    }

    #[test]
    fn index_range_is_enforced() {
        let id = AnalyticMap::identity();
        assert!(star_seminorm(&id, 2.0, &coarse()).is_err());
        assert!(star_seminorm(&id, -0.1, &coarse()).is_err());
    }
}
