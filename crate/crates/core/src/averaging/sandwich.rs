//! Exact evaluation of the triangle sandwich.
//!
//! The sector `[φ₁, φ₂)` is rotated to be symmetric about the positive
//! y-axis with half width `φ`. For a holonomy `v` with radius `ρ` and signed
//! angle `α` from the axis, the set of rotations `s` with
//! `a_t r_s v ∈ W` is `J − α` where `J = {γ : g₀ ≤ |γ| ≤ θ_t}`,
//! `g₀ = arccos(H/ρ)` for `ρ > H` and 0 otherwise, and `H` is the height
//! of `a_{-t} W`. Intersecting with `I_t^∓ = [−(φ ∓ θ_t), φ ∓ θ_t]` and
//! dividing by `2θ_t` gives the contribution of `v` to
//! `(π/θ_t)·π(Σ_{ν,t}) 1̂_W`.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::averaging::theta_t;
use crate::counting::{count_sector, SectorSpec};
use crate::error::{Error, Result};
use crate::planar::wrap_angle;
use crate::saddle::{self, HolonomySet};
use crate::surface::TranslationSurface;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichReport {
    pub t: f64,
    pub theta: f64,
    pub theta_t: f64,
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
    pub slack: f64,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower <= self.middle + self.slack && self.middle <= self.upper + self.slack
    }
}

/// Length of `[a, b] ∩ [-l, l]` on the circle, for `b - a < 2π`.
fn arc_overlap(a: f64, b: f64, l: f64) -> f64 {
    if l <= 0.0 || b <= a {
        return 0.0;
    }
    if l >= PI {
        return b - a;
    }
    (-2..=2)
        .map(|k| {
            let shift = k as f64 * TAU;
            let lo = (a + shift).max(-l);
            let hi = (b + shift).min(l);
            (hi - lo).max(0.0)
        })
        .sum()
}

/// Fraction of `[-θ_t, θ_t]` worth of rotations in `I = [-l, l]` that carry
/// a vector of radius `rho`, axis angle `alpha`, into a triangle of height
/// `height`.
fn vector_fraction(rho: f64, alpha: f64, th_t: f64, height: f64, l: f64) -> f64 {
    let g0 = if rho <= height { 0.0 } else { (height / rho).acos() };
    if g0 >= th_t {
        return 0.0;
    }
    let m = arc_overlap(g0 - alpha, th_t - alpha, l) + arc_overlap(-th_t - alpha, -g0 - alpha, l);
    (m / (2.0 * th_t)).clamp(0.0, 1.0)
}

/// Enumeration radius needed at time `t` and half angle `θ`.
pub fn required_radius(t: f64, theta: f64) -> f64 {
    ((2.0 * t).exp() + (-2.0 * t).exp() * theta.tan().powi(2)).sqrt()
}

/// `(lower, middle, upper)` from a holonomy set enumerated to at least
/// [`required_radius`].
pub fn sandwich_check(h: &HolonomySet, t: f64, theta: f64, sec: &SectorSpec) -> Result<SandwichReport> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidArgument(format!("θ must lie in (0, 1), got {theta}")));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("t must be >= 0, got {t}")));
    }
    let need = required_radius(t, theta);
    if need > h.radius() * (1.0 + 1e-12) {
        return Err(Error::RadiusExceedsEnumeration {
            requested: need,
            available: h.radius(),
        });
    }
    let th_t = theta_t(theta, t);
    let center = 0.5 * (sec.phi1 + sec.phi2);
    let phi = 0.5 * sec.width();
    let et = t.exp();
    let (h1, h2) = (et * theta.cos(), et);
    let (l_minus, l_plus) = (phi - th_t, phi + th_t);

    let mut lower = 0.0;
    let mut upper = 0.0;
    for e in h.within(need) {
        let v = e.holonomy;
        let alpha = wrap_angle(v.angle() - center);
        let rho = v.norm();
        lower += vector_fraction(rho, alpha, th_t, h1, l_minus);
        upper += vector_fraction(rho, alpha, th_t, h2, l_plus);
    }
    let middle = count_sector(h, et, sec)? as f64;
    let slack = 1e-9 * middle.max(upper).max(1.0);
    Ok(SandwichReport {
        t,
        theta,
        theta_t: th_t,
        lower,
        middle,
        upper,
        slack,
    })
}

/// Enumerates `s` at the required radius and runs [`sandwich_check`].
pub fn sandwich_check_surface(s: &TranslationSurface, t: f64, theta: f64, sec: &SectorSpec) -> Result<SandwichReport> {
    let h = saddle::enumerate(s, required_radius(t, theta))?;
    sandwich_check(&h, t, theta, sec)
}
