//! Cusp cutoff, the rotation derivative of Siegel–Veech transforms and the
//! degree-one Sobolev norm.
//!
//! Convention: `ω` generates counterclockwise rotations and `K` acts on
//! functions by `π(k)f(x) = f(k⁻¹x)`, so
//! `π(ω)f(x) = d/dh f(r_{-h} x)` at `h = 0`. On planar functions the same
//! formula gives `∂_θψ(v) = −d/dφ ψ(r_φ v)`.

use serde::Serialize;

use crate::counting::transform_under;
use crate::error::{Error, Result};
use crate::planar::PlanarFunction;
use crate::saddle::{self, HolonomySet};
use crate::surface::{r_theta, GroupElement, TranslationSurface};

fn transform(psi: &dyn PlanarFunction, s: &TranslationSurface) -> Result<(HolonomySet, f64)> {
    let h = saddle::enumerate(s, psi.support_radius())?;
    let v = transform_under(psi, &h, &GroupElement::IDENTITY)?;
    Ok((h, v))
}

/// `(ψ̂(s)(1 − χ_ε(s)), ψ̂(s) χ_ε(s))` with `χ_ε(s) = 1` iff `ℓ(s) < ε`.
pub fn cusp_decompose(psi: &dyn PlanarFunction, s: &TranslationSurface, eps: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    let (_, value) = transform(psi, s)?;
    if s.systole(eps) < eps {
        Ok((0.0, value))
    } else {
        Ok((value, 0.0))
    }
}

/// `Σ ∂_θψ(v)` over a holonomy set.
pub fn derivative_transform(psi: &dyn PlanarFunction, h: &HolonomySet) -> Result<f64> {
    let r = psi.support_radius();
    if r > h.radius() * (1.0 + 1e-12) {
        return Err(Error::SupportExceedsEnumeration {
            support: r,
            available: h.radius(),
        });
    }
    let mut total = 0.0;
    for e in h.within(r) {
        let d = psi
            .angular_derivative(e.holonomy)
            .ok_or_else(|| Error::InvalidArgument("ψ has no closed-form angular derivative".into()))?;
        total -= d;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutationCheck {
    pub finite_diff: f64,
    pub exact: f64,
    pub gap: f64,
}

/// Compares `(ψ̂(r_{-h}s) − ψ̂(r_h s))/2h` with `(∂_θψ)^(s)`.
pub fn derivative_commutation_check(
    psi: &dyn PlanarFunction,
    s: &TranslationSurface,
    h_step: f64,
) -> Result<CommutationCheck> {
    if !(1e-6..=1e-3).contains(&h_step) {
        return Err(Error::InvalidArgument(format!("h_step must lie in [1e-6, 1e-3], got {h_step}")));
    }
    // rotations preserve norms, so one enumeration serves all three terms
    let h = saddle::enumerate(s, psi.support_radius())?;
    let minus = transform_under(psi, &h, &r_theta(-h_step))?;
    let plus = transform_under(psi, &h, &r_theta(h_step))?;
    let finite_diff = (minus - plus) / (2.0 * h_step);
    let exact = derivative_transform(psi, &h)?;
    Ok(CommutationCheck {
        finite_diff,
        exact,
        gap: (finite_diff - exact).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SobolevEstimate {
    /// Monte-Carlo estimate of `S_K(f_main)² = ‖f_main‖² + ‖π(ω)f_main‖²`.
    pub estimate: f64,
    pub std_error: f64,
    /// The `‖f_main‖²` part.
    pub norm_term: f64,
    /// The `‖π(ω)f_main‖²` part.
    pub derivative_term: f64,
    pub n: usize,
}

/// Sample average of `f_main² + (π(ω) f_main)²` with
/// `f_main = ψ̂(1 − χ_ε)`.
pub fn sobolev_estimate(psi: &dyn PlanarFunction, samples: &[TranslationSurface], eps: f64) -> Result<SobolevEstimate> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    use rayon::prelude::*;
    let rows: Vec<Result<(f64, f64)>> = samples
        .par_iter()
        .map(|s| {
            if s.systole(eps) < eps {
                return Ok((0.0, 0.0));
            }
            let h = saddle::enumerate(s, psi.support_radius())?;
            let f = transform_under(psi, &h, &GroupElement::IDENTITY)?;
            let df = derivative_transform(psi, &h)?;
            Ok((f * f, df * df))
        })
        .collect();
    let mut vals = Vec::with_capacity(rows.len());
    let (mut a, mut b) = (0.0, 0.0);
    for r in rows {
        let (f2, d2) = r?;
        a += f2;
        b += d2;
        vals.push(f2 + d2);
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = if vals.len() > 1 {
        vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(SobolevEstimate {
        estimate: mean,
        std_error: (var / n).sqrt(),
        norm_term: a / n,
        derivative_term: b / n,
        n: vals.len(),
    })
}
