//! Compactly supported test functions on the plane.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::surface::{GroupElement, PlanarVector};

/// A bounded function on R² with support in a closed ball about the origin.
pub trait PlanarFunction: Send + Sync {
    fn value(&self, v: PlanarVector) -> f64;

    fn support_radius(&self) -> f64;

    /// `∫ψ dx`. The default is a polar midpoint rule; types with a closed
    /// form override it.
    fn integral(&self) -> f64 {
        polar_integral(|v| self.value(v), self.support_radius(), 512, 1024)
    }

    /// Counterclockwise angular derivative `d/dφ ψ(r_φ v)` at `φ = 0`, when
    /// available in closed form.
    fn angular_derivative(&self, _v: PlanarVector) -> Option<f64> {
        None
    }
}

impl<T: PlanarFunction + ?Sized> PlanarFunction for Arc<T> {
    fn value(&self, v: PlanarVector) -> f64 {
        (**self).value(v)
    }
    fn support_radius(&self) -> f64 {
        (**self).support_radius()
    }
    fn integral(&self) -> f64 {
        (**self).integral()
    }
    fn angular_derivative(&self, v: PlanarVector) -> Option<f64> {
        (**self).angular_derivative(v)
    }
}

impl<T: PlanarFunction + ?Sized> PlanarFunction for Box<T> {
    fn value(&self, v: PlanarVector) -> f64 {
        (**self).value(v)
    }
    fn support_radius(&self) -> f64 {
        (**self).support_radius()
    }
    fn integral(&self) -> f64 {
        (**self).integral()
    }
    fn angular_derivative(&self, v: PlanarVector) -> Option<f64> {
        (**self).angular_derivative(v)
    }
}

/// Midpoint rule in polar coordinates over the disk of radius `r`.
pub fn polar_integral(f: impl Fn(PlanarVector) -> f64, r: f64, nr: usize, na: usize) -> f64 {
    let dr = r / nr as f64;
    let da = TAU / na as f64;
    let mut total = 0.0;
    for i in 0..nr {
        let rho = (i as f64 + 0.5) * dr;
        let mut ring = 0.0;
        for j in 0..na {
            ring += f(PlanarVector::from_polar(rho, (j as f64 + 0.5) * da));
        }
        total += ring * rho;
    }
    total * dr * da
}

/// Wraps an angle to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(TAU);
    if x > PI {
        x -= TAU;
    }
    x
}

/// Signed angle of `v` measured from the positive y-axis, in `(-π, π]`,
/// counterclockwise positive.
pub fn angle_from_vertical(v: PlanarVector) -> f64 {
    wrap_angle(v.angle() - PI / 2.0)
}

#[derive(Debug, Clone, Copy)]
pub struct BallIndicator {
    pub radius: f64,
}

impl PlanarFunction for BallIndicator {
    fn value(&self, v: PlanarVector) -> f64 {
        if v.norm() <= self.radius {
            1.0
        } else {
            0.0
        }
    }
    fn support_radius(&self) -> f64 {
        self.radius
    }
    fn integral(&self) -> f64 {
        PI * self.radius * self.radius
    }
    fn angular_derivative(&self, _v: PlanarVector) -> Option<f64> {
        Some(0.0)
    }
}

/// The zero function with a nominal support radius.
#[derive(Debug, Clone, Copy)]
pub struct Zero {
    pub radius: f64,
}

impl PlanarFunction for Zero {
    fn value(&self, _v: PlanarVector) -> f64 {
        0.0
    }
    fn support_radius(&self) -> f64 {
        self.radius
    }
    fn integral(&self) -> f64 {
        0.0
    }
    fn angular_derivative(&self, _v: PlanarVector) -> Option<f64> {
        Some(0.0)
    }
}

/// `factor · ψ`.
pub struct Scaled<F> {
    pub inner: F,
    pub factor: f64,
}

impl<F: PlanarFunction> PlanarFunction for Scaled<F> {
    fn value(&self, v: PlanarVector) -> f64 {
        self.factor * self.inner.value(v)
    }
    fn support_radius(&self) -> f64 {
        self.inner.support_radius()
    }
    fn integral(&self) -> f64 {
        self.factor * self.inner.integral()
    }
    fn angular_derivative(&self, v: PlanarVector) -> Option<f64> {
        self.inner.angular_derivative(v).map(|d| self.factor * d)
    }
}

/// `ψ ∘ r_angle`.
pub struct Rotated<F> {
    pub inner: F,
    pub angle: f64,
}

impl<F: PlanarFunction> PlanarFunction for Rotated<F> {
    fn value(&self, v: PlanarVector) -> f64 {
        self.inner.value(GroupElement::r_theta(self.angle).apply(v))
    }
    fn support_radius(&self) -> f64 {
        self.inner.support_radius()
    }
    fn integral(&self) -> f64 {
        self.inner.integral()
    }
    fn angular_derivative(&self, v: PlanarVector) -> Option<f64> {
        self.inner.angular_derivative(GroupElement::r_theta(self.angle).apply(v))
    }
}

/// Standard smooth bump `exp(-1/(1-x²))` on `(-1, 1)` and its derivative.
pub fn bump(x: f64) -> (f64, f64) {
    if x.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let d = 1.0 - x * x;
    let b = (-1.0 / d).exp();
    (b, b * (-2.0 * x / (d * d)))
}

/// Smooth product `R(r)·A(β)` with a bump in the radius and, optionally, a
/// bump in the angle.
#[derive(Debug, Clone, Copy)]
pub struct PolarBump {
    pub r_center: f64,
    pub r_half_width: f64,
    /// `(center angle, half width)`; `None` for a radial function.
    pub angular: Option<(f64, f64)>,
}

impl PolarBump {
    fn angular_parts(&self, beta: f64) -> (f64, f64) {
        match self.angular {
            None => (1.0, 0.0),
            Some((c, w)) => {
                let (b, db) = bump(wrap_angle(beta - c) / w);
                (b, db / w)
            }
        }
    }
}

impl PlanarFunction for PolarBump {
    fn value(&self, v: PlanarVector) -> f64 {
        let (r, _) = bump((v.norm() - self.r_center) / self.r_half_width);
        if r == 0.0 {
            return 0.0;
        }
        r * self.angular_parts(v.angle()).0
    }
    fn support_radius(&self) -> f64 {
        self.r_center + self.r_half_width
    }
    fn angular_derivative(&self, v: PlanarVector) -> Option<f64> {
        let (r, _) = bump((v.norm() - self.r_center) / self.r_half_width);
        if r == 0.0 {
            return Some(0.0);
        }
        Some(r * self.angular_parts(v.angle()).1)
    }
}
