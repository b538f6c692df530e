//! Sector and ellipse counts, Siegel–Veech transforms and growth fits.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::planar::PlanarFunction;
use crate::saddle::{self, filter_configuration, ConfigurationFilter, HolonomySet};
use crate::surface::{GroupElement, TranslationSurface};

/// Sector of directions `[phi1, phi2)` modulo 2π, angles from the positive
/// x-axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorSpec {
    pub phi1: f64,
    pub phi2: f64,
}

impl SectorSpec {
    pub fn new(phi1: f64, phi2: f64) -> Result<Self> {
        let w = phi2 - phi1;
        if !phi1.is_finite() || !phi2.is_finite() || !(0.0..=TAU).contains(&w) {
            return Err(Error::InvalidArgument(format!(
                "sector [{phi1}, {phi2}) must satisfy 0 <= phi2 - phi1 <= 2π"
            )));
        }
        Ok(SectorSpec { phi1, phi2 })
    }

    pub fn full() -> Self {
        SectorSpec { phi1: 0.0, phi2: TAU }
    }

    pub fn width(&self) -> f64 {
        self.phi2 - self.phi1
    }

    pub fn is_full(&self) -> bool {
        self.width() >= TAU
    }

    /// Whether an angle in `[0, 2π)` lies in the sector.
    pub fn contains_angle(&self, a: f64) -> bool {
        let w = self.width();
        if w >= TAU {
            return true;
        }
        if w <= 0.0 {
            return false;
        }
        let lo = self.phi1.rem_euclid(TAU);
        let hi = self.phi2.rem_euclid(TAU);
        if lo < hi {
            lo <= a && a < hi
        } else {
            a >= lo || a < hi
        }
    }
}

impl Default for SectorSpec {
    fn default() -> Self {
        SectorSpec::full()
    }
}

fn check_radius(h: &HolonomySet, needed: f64) -> Result<()> {
    // relative slack so that T·|g| computed in floats does not trip the check
    if needed > h.radius() * (1.0 + 1e-12) {
        return Err(Error::RadiusExceedsEnumeration {
            requested: needed,
            available: h.radius(),
        });
    }
    Ok(())
}

/// Number of elements with norm at most `t` and direction in the sector.
pub fn count_sector(h: &HolonomySet, t: f64, sec: &SectorSpec) -> Result<usize> {
    check_radius(h, t)?;
    Ok(h
        .within(t)
        .iter()
        .filter(|e| sec.contains_angle(e.holonomy.angle()))
        .count())
}

/// Number of `v` in the set with `g v` in the sector of radius `t`.
pub fn count_ellipse(h: &HolonomySet, t: f64, g: &GroupElement, sec: &SectorSpec) -> Result<usize> {
    check_radius(h, t * g.operator_norm())?;
    Ok(h
        .elements()
        .iter()
        .map(|e| g.apply(e.holonomy))
        .filter(|w| w.norm() <= t && sec.contains_angle(w.angle()))
        .count())
}

/// `ψ̂ = Σ ψ(v)` over the multiset.
pub fn siegel_veech_transform(psi: &dyn PlanarFunction, h: &HolonomySet) -> Result<f64> {
    transform_under(psi, h, &GroupElement::IDENTITY)
}

/// `Σ ψ(g v)`, the transform evaluated at `g·x` from the set of `x`.
pub fn transform_under(psi: &dyn PlanarFunction, h: &HolonomySet, g: &GroupElement) -> Result<f64> {
    let needed = psi.support_radius() * g.operator_norm();
    if needed > h.radius() * (1.0 + 1e-12) {
        return Err(Error::SupportExceedsEnumeration {
            support: needed,
            available: h.radius(),
        });
    }
    Ok(h.within(needed).iter().map(|e| psi.value(g.apply(e.holonomy))).sum())
}

/// One enumeration at the largest radius, then prefix counts.
pub fn scan_counts(
    s: &TranslationSurface,
    grid: &[f64],
    sec: &SectorSpec,
    cfg: &ConfigurationFilter,
) -> Result<Vec<(f64, usize)>> {
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("T grid must be sorted ascending".into()));
    }
    let tmax = *grid.last().unwrap();
    let base = saddle::enumerate(s, tmax)?;
    let h = filter_configuration(&base, cfg)?;
    scan_set(&h, grid, sec)
}

/// Prefix counts of an existing set over a sorted grid.
pub fn scan_set(h: &HolonomySet, grid: &[f64], sec: &SectorSpec) -> Result<Vec<(f64, usize)>> {
    if let Some(&tmax) = grid.last() {
        check_radius(h, tmax)?;
    }
    let els = h.elements();
    let mut out = Vec::with_capacity(grid.len());
    let mut i = 0;
    let mut n = 0;
    for &t in grid {
        while i < els.len() && els[i].holonomy.norm() <= t {
            if sec.contains_angle(els[i].holonomy.angle()) {
                n += 1;
            }
            i += 1;
        }
        out.push((t, n));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum GrowthModel {
    /// `N ≈ c·x` with `x = (φ₂−φ₁)/2 · T²`.
    Quadratic,
    /// `N ≈ c·x + b·T^e`, selected over the quadratic model by an F-test.
    QuadraticPlusPower { b: f64, e: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub predicted: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthFit {
    pub c_hat: f64,
    /// Slope of `log|N − c_hat·x|` against `log T` over the tail; NaN when
    /// fewer than two tail residuals are nonzero.
    pub error_exponent: f64,
    pub model: GrowthModel,
    pub tail_start: f64,
    pub residuals: Vec<ResidualRow>,
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    /// Fraction of the largest `T` values used for the exponent fit.
    pub tail_fraction: f64,
    /// Significance level of the F-test that admits the power correction.
    pub significance: f64,
    /// Largest exponent tried for the power correction. Over a decade or
    /// two of `T`, powers close to 2 cannot be told apart from `T²`.
    pub max_power: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            tail_fraction: 0.5,
            significance: 0.01,
            max_power: 1.9,
        }
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Least squares for `N = c·x + b·z` without intercept; returns `(c, b, rss)`.
fn two_term_fit(x: &[f64], z: &[f64], n: &[f64]) -> Option<(f64, f64, f64)> {
    let (mut sxx, mut sxz, mut szz, mut sxn, mut szn) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..x.len() {
        sxx += x[i] * x[i];
        sxz += x[i] * z[i];
        szz += z[i] * z[i];
        sxn += x[i] * n[i];
        szn += z[i] * n[i];
    }
    let det = sxx * szz - sxz * sxz;
    if det.abs() <= 1e-14 * sxx * szz {
        return None;
    }
    let c = (sxn * szz - szn * sxz) / det;
    let b = (sxx * szn - sxz * sxn) / det;
    let rss = (0..x.len()).map(|i| (n[i] - c * x[i] - b * z[i]).powi(2)).sum();
    Some((c, b, rss))
}

/// Upper `alpha` quantile of the F(2, d2) distribution.
fn f_critical_2(d2: f64, alpha: f64) -> f64 {
    // P(F > f) = (1 + 2f/d2)^(-d2/2) for two numerator degrees of freedom
    (d2 / 2.0) * (alpha.powf(-2.0 / d2) - 1.0)
}

/// Fits `N ≈ c·(φ₂−φ₁)/2·T²` and the exponent of the remainder.
pub fn fit_growth(series: &[(f64, f64)], sec: &SectorSpec) -> Result<GrowthFit> {
    fit_growth_with(series, sec, &FitOptions::default())
}

pub fn fit_growth_with(series: &[(f64, f64)], sec: &SectorSpec, opts: &FitOptions) -> Result<GrowthFit> {
    if series.len() < 8 {
        return Err(Error::InsufficientData(format!("{} grid points, need at least 8", series.len())));
    }
    if series.iter().any(|&(t, n)| !(t > 0.0) || !n.is_finite()) {
        return Err(Error::InsufficientData("grid values must be positive and finite".into()));
    }
    let tmin = series.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let tmax = series.iter().map(|p| p.0).fold(0.0, f64::max);
    if tmax < 10.0 * tmin {
        return Err(Error::InsufficientData(format!("grid spans {tmin}..{tmax}, need a decade")));
    }
    if sec.width() <= 0.0 {
        return Err(Error::InsufficientData("empty sector".into()));
    }
    let half_w = sec.width() / 2.0;
    let ts: Vec<f64> = series.iter().map(|p| p.0).collect();
    let ns: Vec<f64> = series.iter().map(|p| p.1).collect();
    let xs: Vec<f64> = ts.iter().map(|t| half_w * t * t).collect();

    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let c_ols = xs.iter().zip(&ns).map(|(x, n)| x * n).sum::<f64>() / sxx;
    let rss_ols: f64 = xs.iter().zip(&ns).map(|(x, n)| (n - c_ols * x).powi(2)).sum();
    let scale: f64 = ns.iter().map(|n| n * n).sum();

    let mut model = GrowthModel::Quadratic;
    let mut c_hat = c_ols;
    let m = series.len();
    if rss_ols > 1e-20 * scale && m > 3 {
        let eval = |e: f64| {
            let z: Vec<f64> = ts.iter().map(|t| t.powf(e)).collect();
            two_term_fit(&xs, &z, &ns)
        };
        let mut best: Option<(f64, f64, f64, f64)> = None;
        let max_e = opts.max_power.clamp(0.0, 1.999);
        let steps = (max_e * 1e3).round() as usize;
        for k in 0..=steps {
            let e = k as f64 * 1e-3;
            if let Some((c, b, rss)) = eval(e) {
                if best.is_none_or(|bb| rss < bb.3) {
                    best = Some((e, c, b, rss));
                }
            }
        }
        if let Some((e0, _, _, _)) = best {
            // golden-section refinement around the grid minimum
            let (mut lo, mut hi) = ((e0 - 1e-3).max(0.0), (e0 + 1e-3).min(max_e));
            let gr = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..60 {
                let a = hi - gr * (hi - lo);
                let b = lo + gr * (hi - lo);
                let ra = eval(a).map_or(f64::INFINITY, |r| r.2);
                let rb = eval(b).map_or(f64::INFINITY, |r| r.2);
                if ra < rb {
                    hi = b;
                } else {
                    lo = a;
                }
            }
            let e = 0.5 * (lo + hi);
            // a minimum at the upper end means the correction is mimicking T²
            let interior = e < max_e - 1e-2;
            if let (true, Some((c, b, rss))) = (interior, eval(e)) {
                let d2 = (m - 3) as f64;
                let f_stat = if rss <= 1e-20 * scale {
                    f64::INFINITY
                } else {
                    ((rss_ols - rss) / 2.0) / (rss / d2)
                };
                if f_stat > f_critical_2(d2, opts.significance) {
                    model = GrowthModel::QuadraticPlusPower { b, e };
                    c_hat = c;
                }
            }
        }
    }

    let residuals: Vec<ResidualRow> = (0..m)
        .map(|i| ResidualRow {
            t: ts[i],
            n: ns[i],
            predicted: c_hat * xs[i],
            residual: ns[i] - c_hat * xs[i],
        })
        .collect();

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| ts[a].total_cmp(&ts[b]));
    let k = ((m as f64) * opts.tail_fraction.clamp(0.0, 1.0)).ceil().max(2.0) as usize;
    let tail = &order[m - k.min(m)..];
    let tail_start = ts[tail[0]];
    let (lx, ly): (Vec<f64>, Vec<f64>) = tail
        .iter()
        .filter(|&&i| residuals[i].residual.abs() > 1e-9 * ns[i].abs().max(1.0))
        .map(|&i| (ts[i].ln(), residuals[i].residual.abs().ln()))
        .unzip();
    let error_exponent = if lx.len() >= 2 { slope(&lx, &ly) } else { f64::NAN };

    Ok(GrowthFit {
        c_hat,
        error_exponent,
        model,
        tail_start,
        residuals,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    pub ell: f64,
    pub count: usize,
    pub ratio: f64,
    pub running_sup: f64,
}

/// For each translate `g·s`: systole, `|V(gs) ∩ B(0,R)|` and
/// `count·ℓ^α₁` with its running supremum.
pub fn boundbyell_probe(
    s: &TranslationSurface,
    translates: &[GroupElement],
    radius: f64,
    alpha1: f64,
) -> Result<Vec<ProbeRow>> {
    if !(alpha1 > 1.0) {
        return Err(Error::InvalidArgument(format!("alpha1 must exceed 1, got {alpha1}")));
    }
    let rows: Vec<Result<(f64, usize)>> = translates
        .par_iter()
        .map(|g| {
            let gs = s.apply_group(g);
            let ell = gs.systole(radius.max(1e-3));
            let count = saddle::enumerate(&gs, radius)?.len();
            Ok((ell, count))
        })
        .collect();
    let mut sup: f64 = 0.0;
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let (ell, count) = r?;
        let ratio = count as f64 * ell.powf(alpha1);
        sup = sup.max(ratio);
        out.push(ProbeRow {
            ell,
            count,
            ratio,
            running_sup: sup,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{BallIndicator, Zero};
    use crate::saddle::enumerate;
    use crate::surface::{a_t, r_theta};
    use std::f64::consts::PI;

    #[test]
    fn torus_sector_examples() {
        let h = enumerate(&TranslationSurface::unit_torus(), 2.0).unwrap();
        assert_eq!(count_sector(&h, 2.0, &SectorSpec::full()).unwrap(), 8);
        assert_eq!(count_sector(&h, 2.0, &SectorSpec::new(0.0, PI / 2.0).unwrap()).unwrap(), 2);
        assert_eq!(count_sector(&h, 2.0, &SectorSpec::new(1.0, 1.0).unwrap()).unwrap(), 0);
        assert!(matches!(
            count_sector(&h, 3.0, &SectorSpec::full()),
            Err(Error::RadiusExceedsEnumeration { .. })
        ));
    }

    #[test]
    fn ellipse_examples() {
        let h = enumerate(&TranslationSurface::unit_torus(), 4.0).unwrap();
        assert_eq!(count_ellipse(&h, 1.0, &a_t(2f64.ln()), &SectorSpec::full()).unwrap(), 2);
        let h2 = enumerate(&TranslationSurface::unit_torus(), 2.0).unwrap();
        assert_eq!(count_ellipse(&h2, 2.0, &r_theta(0.77), &SectorSpec::full()).unwrap(), 8);
    }

    #[test]
    fn transform_examples() {
        let h = enumerate(&TranslationSurface::unit_torus(), 2.0).unwrap();
        assert_eq!(siegel_veech_transform(&BallIndicator { radius: 1.0 }, &h).unwrap(), 4.0);
        assert_eq!(siegel_veech_transform(&BallIndicator { radius: 2.0 }, &h).unwrap(), 8.0);
        assert_eq!(siegel_veech_transform(&Zero { radius: 1.0 }, &h).unwrap(), 0.0);
    }

    #[test]
    fn scan_examples() {
        let s = TranslationSurface::unit_torus();
        let cfg = ConfigurationFilter::all();
        let full = SectorSpec::full();
        assert_eq!(scan_counts(&s, &[1.0, 2.0], &full, &cfg).unwrap(), vec![(1.0, 4), (2.0, 8)]);
        assert!(scan_counts(&s, &[], &full, &cfg).unwrap().is_empty());
        assert_eq!(
            scan_counts(&s, &[2.0, 2.0], &full, &cfg).unwrap(),
            vec![(2.0, 8), (2.0, 8)]
        );
    }

    #[test]
    fn exact_quadratic_series() {
        let series: Vec<_> = (1..=20).map(|i| (i as f64 * 10.0, 3.0 * (i as f64 * 10.0).powi(2))).collect();
        let fit = fit_growth(&series, &SectorSpec::new(0.0, 2.0).unwrap()).unwrap();
        assert!((fit.c_hat - 3.0).abs() < 1e-12);
        assert!(fit.residuals.iter().all(|r| r.residual.abs() < 1e-6));
    }

    #[test]
    fn recovers_power_correction() {
        let series: Vec<_> = (0..40)
            .map(|i| {
                let t = 20.0 * 10f64.powf(i as f64 / 39.0);
                (t, 0.6 * PI * t * t + 4.0 * t.powf(1.5))
            })
            .collect();
        let fit = fit_growth(&series, &SectorSpec::full()).unwrap();
        assert!((fit.c_hat - 0.6).abs() < 0.006);
        assert!((fit.error_exponent - 1.5).abs() < 0.015);
    }

    #[test]
    fn insufficient_data() {
        let series: Vec<_> = (1..=5).map(|i| (i as f64, i as f64)).collect();
        assert!(matches!(
            fit_growth(&series, &SectorSpec::full()),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn probe_identity_translate() {
        let s = TranslationSurface::unit_torus();
        let rows = boundbyell_probe(&s, &[GroupElement::IDENTITY, a_t(2.0)], 3.0, 1.5).unwrap();
        assert_eq!(rows[0].ell, 1.0);
        assert_eq!(rows[0].ratio, rows[0].count as f64);
        assert!((rows[1].ell - (-2f64).exp()).abs() < 1e-12);
        assert_eq!(rows[1].count, 2);
        assert!(boundbyell_probe(&s, &[], 3.0, 1.5).unwrap().is_empty());
    }
}
