//! Disk geometry: Möbius involutions, pseudo-hyperbolic distance, boundary
//! arcs and Carleson boxes.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Supremum grids stay this far inside the unit circle so that weights like
/// `(1 - |a|^2)^(1 - q)` never hit catastrophic cancellation.
pub const GRID_MARGIN: f64 = 1e-12;

const DENOMINATOR_FLOOR: f64 = 1e-15;

/// A point strictly inside the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(value: Complex64) -> Result<Self> {
        let modulus = value.norm();
        if !(modulus < 1.0) {
            return Err(Error::OutsideDisk { modulus });
        }
        Ok(Self(value))
    }

    /// Constructor for supremum grids: rejects `|value| >= 1 - 1e-12`.
    pub fn grid(value: Complex64) -> Result<Self> {
        let modulus = value.norm();
        if !(modulus < 1.0 - GRID_MARGIN) {
            return Err(Error::OutsideDisk { modulus });
        }
        Ok(Self(value))
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(r, theta))
    }

    pub fn origin() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }

    #[inline]
    pub fn value(self) -> Complex64 {
        self.0
    }

    #[inline]
    pub fn modulus(self) -> f64 {
        self.0.norm()
    }

    /// `1 - |z|^2`, computed as `(1 - |z|)(1 + |z|)`.
    #[inline]
    pub fn conformal_weight(self) -> f64 {
        one_minus_modulus_sq(self.0)
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

/// `1 - |z|^2` without forming `|z|^2` first.
#[inline]
pub fn one_minus_modulus_sq(z: Complex64) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

/// The disk involution `sigma_b(z) = (b - z) / (1 - conj(b) z)`.
///
/// Defined for `|z| <= 1`; it swaps `0` and `b` and maps the circle onto itself.
pub fn mobius(b: DiskPoint, z: Complex64) -> Result<Complex64> {
    mobius_raw(b.0, z)
}

/// [`mobius`] on a raw complex parameter. The caller guarantees `|b| < 1`.
#[inline]
pub fn mobius_raw(b: Complex64, z: Complex64) -> Result<Complex64> {
    let den = Complex64::new(1.0, 0.0) - b.conj() * z;
    let size = den.norm();
    if size < DENOMINATOR_FLOOR {
        return Err(Error::DegenerateDenominator { size });
    }
    Ok((b - z) / den)
}

/// Pseudo-hyperbolic distance `rho(z, w) = |sigma_w(z)|`.
pub fn pseudo_hyperbolic(z: DiskPoint, w: DiskPoint) -> f64 {
    // both points are strictly inside, so the denominator is bounded below by 1 - |w|
    let num = w.0 - z.0;
    let den = Complex64::new(1.0, 0.0) - w.0.conj() * z.0;
    (num.norm() / den.norm()).min(1.0 - f64::EPSILON)
}

/// Normalize an angle into `[0, 2pi)`.
#[inline]
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t >= 2.0 * PI {
        0.0
    } else {
        t
    }
}

/// Signed angular difference `a - b` folded into `(-pi, pi]`.
#[inline]
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}

/// A closed arc `{e^{it} : |t - center| <= half_length}` of the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleArc {
    pub center_angle: f64,
    pub half_length: f64,
}

impl CircleArc {
    pub fn new(center_angle: f64, half_length: f64) -> Result<Self> {
        if !(half_length > 0.0 && half_length <= PI) {
            return Err(Error::InvalidArc { half_length });
        }
        Ok(Self {
            center_angle: wrap_angle(center_angle),
            half_length,
        })
    }

    pub fn full_circle() -> Self {
        Self {
            center_angle: 0.0,
            half_length: PI,
        }
    }

    /// Arc from `start` counter-clockwise over `length` radians.
    pub fn from_start(start: f64, length: f64) -> Result<Self> {
        Self::new(start + 0.5 * length, 0.5 * length)
    }

    /// Arc length `|I|`.
    #[inline]
    pub fn length(&self) -> f64 {
        2.0 * self.half_length
    }

    #[inline]
    pub fn start(&self) -> f64 {
        wrap_angle(self.center_angle - self.half_length)
    }

    pub fn is_full(&self) -> bool {
        self.half_length >= PI
    }

    pub fn contains_angle(&self, theta: f64) -> bool {
        self.is_full() || angle_diff(theta, self.center_angle).abs() <= self.half_length
    }
}

/// The arc `J(r e^{i theta}) = {e^{it} : |t - theta| <= pi (1 - r)}`.
pub fn centered_arc(point: Complex64) -> Result<CircleArc> {
    let r = point.norm();
    if !(r < 1.0) {
        return Err(Error::OutsideDisk { modulus: r });
    }
    let theta = if r == 0.0 { 0.0 } else { point.arg() };
    CircleArc::new(theta, (PI * (1.0 - r)).min(PI))
}

/// The Carleson box `S(I) = {r e^{i theta} : 1 - |I|/(2 pi) <= r < 1, |theta - theta_I| <= |I|/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlesonBox {
    pub arc: CircleArc,
    pub inner_radius: f64,
}

impl CarlesonBox {
    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        if !(r >= self.inner_radius && r < 1.0) {
            return false;
        }
        r == 0.0 || self.arc.contains_angle(z.arg())
    }
}

pub fn carleson_box(arc: CircleArc) -> CarlesonBox {
    let inner_radius = (1.0 - arc.length() / (2.0 * PI)).max(0.0);
    CarlesonBox { arc, inner_radius }
}
