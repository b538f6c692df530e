use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector in the plane. Holonomies, polygon vertices and developed
/// positions all use this type.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarVector {
    pub x: f64,
    pub y: f64,
}

impl PlanarVector {
    pub const ZERO: PlanarVector = PlanarVector { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        PlanarVector { x, y }
    }

    pub fn from_polar(r: f64, angle: f64) -> Self {
        PlanarVector::new(r * angle.cos(), r * angle.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, other: PlanarVector) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-d cross product; positive when `other` is
    /// counterclockwise from `self`.
    pub fn cross(self, other: PlanarVector) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Angle from the positive x-axis, in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            let w = a + TAU;
            // a tiny negative angle would otherwise round up to exactly 2π
            if w >= TAU {
                0.0
            } else {
                w
            }
        } else {
            a
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }
}

impl Add for PlanarVector {
    type Output = PlanarVector;
    fn add(self, o: PlanarVector) -> PlanarVector {
        PlanarVector::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for PlanarVector {
    type Output = PlanarVector;
    fn sub(self, o: PlanarVector) -> PlanarVector {
        PlanarVector::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlanarVector {
    type Output = PlanarVector;
    fn neg(self) -> PlanarVector {
        PlanarVector::new(-self.x, -self.y)
    }
}

impl Mul<f64> for PlanarVector {
    type Output = PlanarVector;
    fn mul(self, s: f64) -> PlanarVector {
        PlanarVector::new(self.x * s, self.y * s)
    }
}

impl fmt::Display for PlanarVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Determinant tolerance for matrices with non-integer entries.
pub const DET_TOLERANCE: f64 = 1e-12;

/// An element of SL(2,R), stored row-major as `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let g = GroupElement { a, b, c, d };
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::NotUnimodular { det: f64::NAN });
        }
        let det = g.det();
        let ok = if g.is_integer() {
            det == 1.0
        } else {
            (det - 1.0).abs() <= DET_TOLERANCE
        };
        if !ok {
            return Err(Error::NotUnimodular { det });
        }
        Ok(g)
    }

    /// Builds a matrix without checking the determinant. Only used for
    /// products and inverses of already valid elements.
    fn raw(a: f64, b: f64, c: f64, d: f64) -> Self {
        GroupElement { a, b, c, d }
    }

    /// The diagonal flow `diag(e^t, e^-t)`.
    pub fn a_t(t: f64) -> Self {
        GroupElement::raw(t.exp(), 0.0, 0.0, (-t).exp())
    }

    /// Counterclockwise rotation by `theta`.
    pub fn r_theta(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        GroupElement::raw(c, -s, s, c)
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_integer(&self) -> bool {
        [self.a, self.b, self.c, self.d]
            .iter()
            .all(|v| v.fract() == 0.0 && v.abs() < 9.0e15)
    }

    pub fn is_identity(&self) -> bool {
        *self == GroupElement::IDENTITY
    }

    pub fn inverse(&self) -> Self {
        // det is 1
        GroupElement::raw(self.d, -self.b, -self.c, self.a)
    }

    pub fn compose(&self, rhs: &GroupElement) -> Self {
        GroupElement::raw(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }

    pub fn apply(&self, v: PlanarVector) -> PlanarVector {
        PlanarVector::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    /// Largest singular value. For unit determinant this equals the operator
    /// norm of the inverse as well.
    pub fn operator_norm(&self) -> f64 {
        let f = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d;
        let det = self.det();
        let disc = (f * f - 4.0 * det * det).max(0.0);
        ((f + disc.sqrt()) / 2.0).sqrt()
    }

    /// Integer entries as `i64`, when the element is integral.
    pub fn integer_entries(&self) -> Option<[i64; 4]> {
        if self.is_integer() {
            Some([self.a as i64, self.b as i64, self.c as i64, self.d as i64])
        } else {
            None
        }
    }

    pub fn max_entry_diff(&self, other: &GroupElement) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        self.compose(&rhs)
    }
}

impl Mul<PlanarVector> for GroupElement {
    type Output = PlanarVector;
    fn mul(self, v: PlanarVector) -> PlanarVector {
        self.apply(v)
    }
}

impl Default for GroupElement {
    fn default() -> Self {
        GroupElement::IDENTITY
    }
}

/// Shorthand for [`GroupElement::a_t`].
pub fn a_t(t: f64) -> GroupElement {
    GroupElement::a_t(t)
}

/// Shorthand for [`GroupElement::r_theta`].
pub fn r_theta(theta: f64) -> GroupElement {
    GroupElement::r_theta(theta)
}
