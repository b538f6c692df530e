//! Circle and ellipse averages over `a_t K`-orbits, the triangle sandwich,
//! smoothing functions and the cusp cutoff.

pub mod cusp;
pub mod sandwich;
pub mod smoothing;

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{a_t, r_theta, GroupElement, TranslationSurface};

pub use cusp::{cusp_decompose, derivative_commutation_check, sobolev_estimate, CommutationCheck};
pub use sandwich::{sandwich_check, sandwich_check_surface, SandwichReport};
pub use smoothing::{smooth_psi, BumpSign, Region, RegionIndicator, SmoothBump};

/// Half apex angle of the triangles `a_{-t} W`: `arctan(e^{-2t} tan θ)`.
pub fn theta_t(theta: f64, t: f64) -> f64 {
    ((-2.0 * t).exp() * theta.tan()).atan()
}

/// The clamped cubic smoothstep on `[0, 1]`.
pub fn smoothstep(u: f64) -> (f64, f64) {
    if u <= 0.0 {
        (0.0, 0.0)
    } else if u >= 1.0 {
        (1.0, 0.0)
    } else {
        (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u))
    }
}

/// Density on the rotation angle of `K = SO(2)`, bounded by 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircleDensity {
    IntervalIndicator { lo: f64, hi: f64 },
    /// Plateau of half width `half_width - delta` around `center`, cubic
    /// ramps of width `delta`, zero beyond `half_width`.
    Smoothed { center: f64, half_width: f64, delta: f64 },
}

impl CircleDensity {
    pub fn full() -> Self {
        CircleDensity::IntervalIndicator { lo: 0.0, hi: TAU }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            CircleDensity::IntervalIndicator { lo, hi } => lo.is_finite() && hi >= lo && hi - lo <= TAU,
            CircleDensity::Smoothed { center, half_width, delta } => {
                center.is_finite() && delta > 0.0 && delta <= half_width && half_width <= TAU / 2.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid circle density {self:?}")))
        }
    }

    /// Support as an interval of rotation angles.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            CircleDensity::IntervalIndicator { lo, hi } => (lo, hi),
            CircleDensity::Smoothed { center, half_width, .. } => (center - half_width, center + half_width),
        }
    }

    /// Density at an angle inside the support.
    pub fn value(&self, theta: f64) -> f64 {
        match *self {
            CircleDensity::IntervalIndicator { lo, hi } => {
                if (lo..=hi).contains(&theta) {
                    1.0
                } else {
                    0.0
                }
            }
            CircleDensity::Smoothed { center, half_width, delta } => {
                smoothstep((half_width - (theta - center).abs()) / delta).0
            }
        }
    }

    /// `ν(K) = ∫ν dm_K` with `m_K` the probability Haar measure.
    pub fn mass(&self) -> f64 {
        match *self {
            CircleDensity::IntervalIndicator { lo, hi } => (hi - lo) / TAU,
            CircleDensity::Smoothed { half_width, delta, .. } => (2.0 * half_width - delta) / TAU,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub nodes: usize,
}

/// Largest node count used by the auto-doubling midpoint rule.
pub const MAX_NODES: usize = 1 << 20;
/// Stopping threshold on successive midpoint values.
pub const DOUBLING_TOLERANCE: f64 = 1e-8;

fn midpoint<F>(f: &F, s: &TranslationSurface, t: f64, nu: &CircleDensity, g: &GroupElement, n: usize) -> Result<f64>
where
    F: Fn(&TranslationSurface) -> Result<f64> + Sync,
{
    let (lo, hi) = nu.support();
    let w = (hi - lo) / n as f64;
    let at = a_t(t);
    let vals: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let th = lo + (j as f64 + 0.5) * w;
            let dens = nu.value(th);
            if dens == 0.0 {
                return Ok(0.0);
            }
            let h = at * r_theta(th) * *g;
            Ok(f(&s.apply_group(&h))? * dens)
        })
        .collect();
    let mut total = 0.0;
    for v in vals {
        total += v?;
    }
    Ok(total * w / TAU)
}

/// `∫ f(a_t k g s) ν(k) dm_K` by the midpoint rule on the support of `ν`,
/// doubling the node count from `n_quad` until successive values differ by
/// less than [`DOUBLING_TOLERANCE`] or [`MAX_NODES`] is reached.
pub fn ellipse_average<F>(
    f: F,
    s: &TranslationSurface,
    t: f64,
    nu: &CircleDensity,
    g: &GroupElement,
    n_quad: usize,
) -> Result<Quadrature>
where
    F: Fn(&TranslationSurface) -> Result<f64> + Sync,
{
    nu.validate()?;
    if n_quad < 16 {
        return Err(Error::InvalidArgument(format!("n_quad must be at least 16, got {n_quad}")));
    }
    let (lo, hi) = nu.support();
    if hi <= lo {
        return Ok(Quadrature { value: 0.0, nodes: 0 });
    }
    let mut n = n_quad;
    let mut prev = midpoint(&f, s, t, nu, g, n)?;
    while n * 2 <= MAX_NODES {
        n *= 2;
        let cur = midpoint(&f, s, t, nu, g, n)?;
        let done = (cur - prev).abs() < DOUBLING_TOLERANCE;
        prev = cur;
        if done {
            break;
        }
    }
    Ok(Quadrature { value: prev, nodes: n })
}

/// `∫ f(a_t k s) ν(k) dm_K`.
pub fn circle_average<F>(f: F, s: &TranslationSurface, t: f64, nu: &CircleDensity, n_quad: usize) -> Result<Quadrature>
where
    F: Fn(&TranslationSurface) -> Result<f64> + Sync,
{
    ellipse_average(f, s, t, nu, &GroupElement::IDENTITY, n_quad)
}

/// Midpoint rule with a fixed node count and no doubling.
pub fn circle_average_fixed<F>(f: F, s: &TranslationSurface, t: f64, nu: &CircleDensity, n: usize) -> Result<f64>
where
    F: Fn(&TranslationSurface) -> Result<f64> + Sync,
{
    nu.validate()?;
    if n == 0 {
        return Err(Error::InvalidArgument("node count must be positive".into()));
    }
    midpoint(&f, s, t, nu, &GroupElement::IDENTITY, n)
}
