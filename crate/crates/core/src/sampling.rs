//! Flat measure on the torus locus and the Monte-Carlo checks built on it.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::averaging::{circle_average, CircleDensity};
use crate::error::{Error, Result};
use crate::planar::PlanarFunction;
use crate::saddle::lattice::{reduce_basis, sum_primitive};
use crate::surface::{a_t, r_theta, GroupElement, PlanarVector, TranslationSurface};

/// A unit-area flat torus: `z = x + iy` in the modular fundamental domain
/// and a rotation `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusSample {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
}

impl TorusSample {
    /// `r_φ · [[1, x], [0, y]] / √y`.
    pub fn group_element(&self) -> GroupElement {
        let s = self.y.sqrt();
        let m = GroupElement::new(1.0 / s, self.x / s, 0.0, s).expect("unit determinant");
        r_theta(self.phi) * m
    }

    pub fn basis(&self) -> (PlanarVector, PlanarVector) {
        let g = self.group_element();
        (g.apply(PlanarVector::new(1.0, 0.0)), g.apply(PlanarVector::new(0.0, 1.0)))
    }

    pub fn surface(&self) -> TranslationSurface {
        TranslationSurface::unit_torus().apply_group(&self.group_element())
    }
}

fn draw(rng: &mut ChaCha8Rng) -> TorusSample {
    let y0 = 3f64.sqrt() / 2.0;
    loop {
        let x: f64 = rng.random::<f64>() - 0.5;
        let u: f64 = rng.random::<f64>();
        let y = y0 / (1.0 - u);
        let phi: f64 = rng.random::<f64>() * PI;
        if x * x + y * y >= 1.0 {
            return TorusSample { x, y, phi };
        }
    }
}

/// `n` i.i.d. samples. Sample `i` uses its own ChaCha8 stream, so the
/// output does not depend on thread scheduling.
pub fn sample_torus(seed: u64, n: usize) -> Result<Vec<TorusSample>> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            draw(&mut rng)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McReport {
    pub estimate: f64,
    pub std_error: f64,
    pub n: usize,
    pub seed: u64,
}

/// `ψ̂` on a lattice torus: the sum over primitive vectors.
pub fn lattice_transform(psi: &dyn PlanarFunction, b1: PlanarVector, b2: PlanarVector) -> f64 {
    sum_primitive(b1, b2, psi.support_radius(), |v| psi.value(v))
}

/// Mean of `ψ̂` over `n` samples divided by `∫ψ`.
pub fn mc_siegel_veech(psi: &dyn PlanarFunction, n: usize, seed: u64) -> Result<McReport> {
    let mass = psi.integral();
    if mass.abs() < 1e-300 {
        return Err(Error::ZeroMassPsi);
    }
    let samples = sample_torus(seed, n)?;
    let vals: Vec<f64> = samples
        .par_iter()
        .map(|s| {
            let (b1, b2) = s.basis();
            lattice_transform(psi, b1, b2)
        })
        .collect();
    let (mean, sd) = mean_sd(&vals);
    Ok(McReport {
        estimate: mean / mass,
        std_error: sd / (vals.len() as f64).sqrt() / mass.abs(),
        n,
        seed,
    })
}

fn mean_sd(vals: &[f64]) -> (f64, f64) {
    let n = vals.len() as f64;
    let mean = pairwise_sum(vals) / n;
    let dev: Vec<f64> = vals.iter().map(|v| (v - mean).powi(2)).collect();
    let var = if vals.len() > 1 { pairwise_sum(&dev) / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        v.iter().sum()
    } else {
        let m = v.len() / 2;
        pairwise_sum(&v[..m]) + pairwise_sum(&v[m..])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrabilityRow {
    pub t: f64,
    pub value: f64,
    pub running_sup: f64,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Circle average of `ℓ^{-α}` on a unit-covolume lattice. At most one pair
/// `±v` is shorter than 1, so with `f(r) = (r^{-α} − 1)·1[r < 1]`
/// `ℓ^{-α} = Σ_{±v} f(|v|) + min(ℓ^{-α}, 1)`.
/// The sum averages vector by vector in closed form up to a 1-D integral
/// shared by all vectors; the remainder is continuous and bounded and uses
/// the midpoint rule.
struct LatticeSystoleAverage {
    t: f64,
    alpha: f64,
    /// Cumulative integral of the shared kernel, and the kernel itself, on
    /// a uniform `y` grid; read back by cubic Hermite interpolation.
    step: f64,
    cumulative: Vec<f64>,
    slope: Vec<f64>,
    gl: Vec<(f64, f64)>,
}

impl LatticeSystoleAverage {
    fn new(t: f64, alpha: f64) -> Self {
        let step = 1.0 / 32.0;
        let ymax = 4.0 * t + 60.0;
        let panels = (ymax / step).ceil() as usize;
        let gl = gauss_legendre(12);
        let mut me = LatticeSystoleAverage {
            t,
            alpha,
            step,
            cumulative: Vec::with_capacity(panels + 1),
            slope: Vec::with_capacity(panels + 1),
            gl,
        };
        let mut acc = 0.0;
        me.cumulative.push(0.0);
        me.slope.push(me.kernel(0.0));
        for k in 0..panels {
            let b = (k + 1) as f64 * step;
            acc += me.panel(k as f64 * step, b);
            me.cumulative.push(acc);
            me.slope.push(me.kernel(b));
        }
        me
    }

    /// `cosh^{1−α}(y)·(1 + e^{-4t} sinh² y)^{α/2 − 1}`.
    fn kernel(&self, y: f64) -> f64 {
        let sh = y.sinh();
        y.cosh().powf(1.0 - self.alpha) * (1.0 + (-4.0 * self.t).exp() * sh * sh).powf(self.alpha / 2.0 - 1.0)
    }

    fn panel(&self, a: f64, b: f64) -> f64 {
        let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
        self.gl.iter().map(|&(x, w)| w * self.kernel(m + r * x)).sum::<f64>() * r
    }

    fn kernel_integral(&self, y: f64) -> f64 {
        let last = self.cumulative.len() - 1;
        let k = ((y / self.step).floor() as usize).min(last);
        if k == last {
            return self.cumulative[last];
        }
        let h = self.step;
        let u = y / h - k as f64;
        let (u2, u3) = (u * u, u * u * u);
        let (p0, p1) = (self.cumulative[k], self.cumulative[k + 1]);
        let (m0, m1) = (self.slope[k] * h, self.slope[k + 1] * h);
        (2.0 * u3 - 3.0 * u2 + 1.0) * p0 + (u3 - 2.0 * u2 + u) * m0 + (-2.0 * u3 + 3.0 * u2) * p1 + (u3 - u2) * m1
    }

    /// `∫_0^{2π} f(|a_t r_θ v|) dθ` for `|v| = rho`.
    fn vector_integral(&self, rho: f64) -> f64 {
        let t = self.t;
        let (e2, em2) = ((2.0 * t).exp(), (-2.0 * t).exp());
        if rho * (-t).exp() >= 1.0 - 1e-12 {
            return 0.0;
        }
        let y = if rho * t.exp() <= 1.0 {
            f64::INFINITY
        } else {
            let tau_m = ((1.0 - rho * rho * em2) / (rho * rho * e2 - 1.0)).sqrt();
            (e2 * tau_m).asinh()
        };
        let power = 4.0 * rho.powf(-self.alpha) * ((self.alpha - 2.0) * t).exp() * self.kernel_integral(y);
        // |a_t r_θ v| < 1 iff |cos φ| < s, φ the angle of r_θ v
        let c = ((1.0 / (rho * rho) - em2) / (e2 - em2)).clamp(0.0, 1.0);
        power - 4.0 * c.sqrt().asin()
    }
}

/// Circle average over `t`-translates of the lattice spanned by `b1, b2`
/// (unit covolume) of `ℓ^{-α}`.
pub fn lattice_systole_average(b1: PlanarVector, b2: PlanarVector, t: f64, alpha: f64, n_quad: usize) -> f64 {
    let avg = LatticeSystoleAverage::new(t, alpha);
    let r = t.exp();
    // vectors come in ± pairs; each pair counts once
    let short = sum_primitive(b1, b2, r, |v| avg.vector_integral(v.norm())) / 2.0;
    let short = short / TAU;

    let bounded = |n: usize| -> f64 {
        let w = TAU / n as f64;
        let at = a_t(t);
        let vals: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|j| {
                let g = at * r_theta((j as f64 + 0.5) * w);
                let (s1, _) = reduce_basis(g.apply(b1), g.apply(b2));
                s1.norm().powf(-alpha).min(1.0)
            })
            .collect();
        pairwise_sum(&vals) / n as f64
    };
    let mut n = n_quad.max(16);
    let mut prev = bounded(n);
    while n < (1 << 22) {
        n *= 2;
        let cur = bounded(n);
        let done = (cur - prev).abs() < 1e-6;
        prev = cur;
        if done {
            break;
        }
    }
    short + prev
}

/// `π(Σ_t)(ℓ^{-α₂})` along `t_grid` with its running supremum.
pub fn integrability_probe(
    alpha2: f64,
    t_grid: &[f64],
    s: &TranslationSurface,
    n_quad: usize,
) -> Result<Vec<IntegrabilityRow>> {
    if !(1.0..2.0).contains(&alpha2) {
        return Err(Error::InvalidArgument(format!("α₂ must lie in [1, 2), got {alpha2}")));
    }
    let mut out = Vec::with_capacity(t_grid.len());
    let mut sup: f64 = 0.0;
    for &t in t_grid {
        let value = match s.torus_lattice() {
            Some((b1, b2)) if (b1.cross(b2).abs() - 1.0).abs() < 1e-9 => {
                lattice_systole_average(b1, b2, t, alpha2, n_quad)
            }
            _ => {
                let hint = s.systole(1.0);
                let f = |x: &TranslationSurface| Ok(x.systole(hint).powf(-alpha2));
                circle_average(f, s, t, &CircleDensity::full(), n_quad)?.value
            }
        };
        sup = sup.max(value);
        out.push(IntegrabilityRow {
            t,
            value,
            running_sup: sup,
        });
    }
    Ok(out)
}
