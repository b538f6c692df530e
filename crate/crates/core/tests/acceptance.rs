//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Reference values come from oracles defined in this file.

use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flatcount::averaging::{derivative_commutation_check, sandwich_check_surface};
use flatcount::counting::{count_ellipse, count_sector, fit_growth, scan_set, SectorSpec};
use flatcount::exponents::{
    kappa_final, kappa_sigma, kappa_sigma_uniform, lambda_prime, solve_sigma, solve_sigma_uniform, summable_sector,
    summable_uniform,
};
use flatcount::planar::{BallIndicator, PolarBump};
use flatcount::saddle::{enumerate, enumerate_exact, enumerate_generic};
use flatcount::sampling::{integrability_probe, mc_siegel_veech};
use flatcount::surface::{a_t, r_theta, GroupElement, PlanarVector, TranslationSurface};

struct Outcome {
    pass: bool,
    detail: String,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    (a, b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primitive integer vectors of norm at most `t`, by brute force.
fn primitive_oracle(t: f64) -> Vec<(i64, i64)> {
    let r = t.floor() as i64;
    let mut out = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            if gcd(x, y) == 1 && ((x * x + y * y) as f64) <= t * t {
                out.push((x, y));
            }
        }
    }
    out.sort();
    out
}

/// `lim N(R)/(πR²)` for primitive vectors of `Z²`, from an exact count at
/// radius `r` via Möbius inversion of the Gauss circle count.
fn primitive_density(r: i64) -> f64 {
    let mut mu = vec![1i64; (r + 1) as usize];
    let mut is_composite = vec![false; (r + 1) as usize];
    for p in 2..=r as usize {
        if !is_composite[p] {
            for m in (p..=r as usize).step_by(p) {
                if m > p {
                    is_composite[m] = true;
                }
                mu[m] = -mu[m];
            }
            let p2 = p * p;
            for m in (p2..=r as usize).step_by(p2) {
                mu[m] = 0;
            }
        }
    }
    let lattice_points = |rad: i64| -> i64 {
        let mut n = 0;
        for x in -rad..=rad {
            let y2 = rad * rad - x * x;
            let mut y = (y2 as f64).sqrt() as i64;
            while (y + 1) * (y + 1) <= y2 {
                y += 1;
            }
            while y * y > y2 {
                y -= 1;
            }
            n += 2 * y + 1;
        }
        n - 1
    };
    // primitive points in radius r: Σ_d μ(d)·#{nonzero points in radius r/d}
    let mut total = 0i64;
    for d in 1..=r {
        if mu[d as usize] != 0 {
            total += mu[d as usize] * lattice_points(r / d);
        }
    }
    total as f64 / (PI * (r * r) as f64)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn c1_torus_exactness() -> Outcome {
    let s = TranslationSurface::unit_torus();
    let h = enumerate_exact(&s, 50.0).unwrap();
    let mut bad = Vec::new();
    for t in 1..=50 {
        let t = t as f64;
        let mut got: Vec<(i64, i64)> = h
            .within(t)
            .iter()
            .map(|e| (e.holonomy.x as i64, e.holonomy.y as i64))
            .collect();
        got.sort();
        let mults = h.multiplicities();
        if got != primitive_oracle(t) || mults.iter().any(|&m| m != 1) {
            bad.push(t);
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("{} elements at T=50, mismatched T: {bad:?}", h.len()),
    }
}

fn c2_engine_agreement() -> Outcome {
    let s = TranslationSurface::l_origami();
    let t = 100.0;
    let exact = enumerate_exact(&s, t).unwrap();
    let generic = enumerate_generic(&s, t).unwrap();
    let key = |e: &flatcount::saddle::SaddleConnection| {
        (
            (e.holonomy.x * 1e6).round() as i64,
            (e.holonomy.y * 1e6).round() as i64,
            e.start,
            e.end,
            e.separatrix,
        )
    };
    let mut a: Vec<_> = exact.elements().to_vec();
    let mut b: Vec<_> = generic.elements().to_vec();
    a.sort_by_key(key);
    b.sort_by_key(key);
    let mut max_gap: f64 = 0.0;
    let mut label_mismatch = 0;
    for (x, y) in a.iter().zip(&b) {
        max_gap = max_gap.max((x.holonomy - y.holonomy).norm());
        if (x.start, x.end, x.separatrix) != (y.start, y.end, y.separatrix) {
            label_mismatch += 1;
        }
    }
    Outcome {
        pass: a.len() == b.len() && max_gap <= 1e-9 && label_mismatch == 0,
        detail: format!(
            "exact {} vs generic {}, max holonomy gap {max_gap:.2e}, label mismatches {label_mismatch}",
            a.len(),
            b.len()
        ),
    }
}

fn c3_quadratic_growth(c_oracle: f64) -> Outcome {
    let s = TranslationSurface::unit_torus();
    let grid = log_grid(20.0, 200.0, 60);
    let sec = SectorSpec::full();
    let h = enumerate(&s, 200.0).unwrap();
    let series: Vec<(f64, f64)> = scan_set(&h, &grid, &sec)
        .unwrap()
        .into_iter()
        .map(|(t, n)| (t, n as f64))
        .collect();
    let fit = fit_growth(&series, &sec).unwrap();
    let cpi = fit.c_hat * PI;
    let rel = (cpi - c_oracle * PI).abs() / (c_oracle * PI);
    Outcome {
        pass: rel <= 0.02 && fit.error_exponent <= 1.82,
        detail: format!(
            "c_hat·π = {cpi:.5} vs oracle {:.5} (rel {rel:.2e}), error exponent {:.3} <= 1.82",
            c_oracle * PI,
            fit.error_exponent
        ),
    }
}

fn c4_sector_proportionality() -> Outcome {
    let s = TranslationSurface::unit_torus();
    let t = 200.0;
    let h = enumerate(&s, t).unwrap();
    let full = count_sector(&h, t, &SectorSpec::full()).unwrap() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..8 {
        let phi1 = rng.random::<f64>() * TAU;
        let width = 0.2 + rng.random::<f64>() * (TAU - 0.2);
        let sec = SectorSpec::new(phi1, phi1 + width).unwrap();
        let ratio = count_sector(&h, t, &sec).unwrap() as f64 / full;
        let expected = width / TAU;
        worst = worst.max((ratio - expected).abs() / expected);
    }
    Outcome {
        pass: worst <= 0.03,
        detail: format!("worst relative deviation {worst:.2e} over 8 sectors"),
    }
}

fn c5_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    let mut violations = Vec::new();
    for (name, s) in [
        ("torus", TranslationSurface::unit_torus()),
        ("L-origami", TranslationSurface::l_origami()),
    ] {
        for i in 0..10 {
            for j in 0..10 {
                let t = 0.3 * i as f64;
                let theta = 0.05 + 0.09 * j as f64;
                let phi1 = rng.random::<f64>() * TAU;
                let width = 2.0 * theta + rng.random::<f64>() * (TAU - 2.0 * theta);
                let sec = SectorSpec::new(phi1, phi1 + width).unwrap();
                let r = sandwich_check_surface(&s, t, theta, &sec).unwrap();
                checked += 1;
                if !r.holds() {
                    violations.push(format!("{name} t={t} θ={theta}: {r:?}"));
                }
            }
        }
    }
    Outcome {
        pass: violations.is_empty(),
        detail: match violations.first() {
            None => format!("{checked} triples, 0 violations"),
            Some(v) => format!("{checked} triples, {} violations, first {v}", violations.len()),
        },
    }
}

fn c6_siegel_veech(c_oracle: f64) -> Outcome {
    let r = mc_siegel_veech(&BallIndicator { radius: 1.0 }, 10_000, 6).unwrap();
    let z = (r.estimate - c_oracle).abs() / r.std_error;
    Outcome {
        pass: z <= 3.0,
        detail: format!(
            "estimate {:.5} ± {:.5} vs oracle {c_oracle:.5} ({z:.2} standard errors)",
            r.estimate, r.std_error
        ),
    }
}

fn c7_exponent_ledger() -> Outcome {
    let mut notes = Vec::new();
    let s1 = solve_sigma(1.0).unwrap();
    let su = solve_sigma_uniform(1.0).unwrap();
    let k = kappa_final(1.0).unwrap();
    if s1 != 11.0 || (k - 1.0 / 11.0).abs() > 1e-15 || su != 17.0 {
        notes.push(format!("σ={s1}, κ={k}, uniform σ={su}"));
    }
    for i in 1..=10 {
        let lam = i as f64 / 10.0;
        let s = solve_sigma(lam).unwrap();
        let gap = (kappa_sigma(lam, s).unwrap() - lam / (2.0 * s)).abs();
        let s = solve_sigma_uniform(lam).unwrap();
        let gap_u = (kappa_sigma_uniform(lam, s).unwrap() - lam / (2.0 * s)).abs();
        if gap > 1e-12 || gap_u > 1e-12 {
            notes.push(format!("fixed point off at λ={lam}: {gap:e}, {gap_u:e}"));
        }
    }
    for (t, len, lam) in [(2.0, 0.5, 1.0), (5.0, 0.01, 0.3), (40.0, 1e-6, 0.9)] {
        let lp = lambda_prime(t, len, lam).unwrap();
        let lhs = len * (2.0 * t * (lp - 1.0)).exp();
        let rhs = len * len * (-2.0 * lam * lp * t).exp();
        if (lhs - rhs).abs() > 1e-12 || !(lp > 0.0 && lp < 1.0) {
            notes.push(format!("λ′ balance off at t={t}: {lhs:e} vs {rhs:e}"));
        }
    }
    for a in [0.9, 1.0, 1.0 + f64::EPSILON, 1.001, 1.5, 1.999] {
        if summable_sector(a) != (a > 1.0) || summable_uniform(a) != (a > 1.0) {
            notes.push(format!("summability wrong at α₁={a}"));
        }
    }
    Outcome {
        pass: notes.is_empty(),
        detail: if notes.is_empty() {
            format!("σ(1) = {s1}, κ = 1/{}, uniform σ(1) = {su}", 1.0 / k)
        } else {
            notes.join("; ")
        },
    }
}

fn c8_commutation() -> Outcome {
    let shear = GroupElement::new(1.0, 0.37, 0.0, 1.0).unwrap();
    let surfaces = [
        TranslationSurface::unit_torus(),
        TranslationSurface::unit_torus().apply_group(&(r_theta(0.3) * shear)),
        TranslationSurface::l_origami(),
        TranslationSurface::l_origami().apply_group(&a_t(0.25)),
        TranslationSurface::l_origami().apply_group(&(r_theta(0.4) * a_t(-0.1))),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut largest_exact: f64 = 0.0;
    for _ in 0..10 {
        let psi = PolarBump {
            r_center: 1.0 + 1.5 * rng.random::<f64>(),
            r_half_width: 0.3 + 0.7 * rng.random::<f64>(),
            angular: Some((rng.random::<f64>() * TAU, 0.3 + 0.9 * rng.random::<f64>())),
        };
        for s in &surfaces {
            let c = derivative_commutation_check(&psi, s, 1e-5).unwrap();
            worst = worst.max(c.gap);
            largest_exact = largest_exact.max(c.exact.abs());
        }
    }
    Outcome {
        pass: worst <= 1e-6,
        detail: format!("max gap {worst:.2e} over 50 pairs (largest |exact| {largest_exact:.3})"),
    }
}

/// `∫_0^{2π} ℓ(a_t r_θ Z²)^{-α} dθ/2π` by a dense midpoint rule on
/// `[0, π/4]`, using the symmetries of the square lattice.
fn systole_average_oracle(t: f64, alpha: f64) -> f64 {
    let (et, emt) = (t.exp(), (-t).exp());
    let n = ((FRAC_PI_4 / (0.4 * (-2.0 * t).exp())).ceil() as usize).max(4096);
    let h = FRAC_PI_4 / n as f64;
    let mut sum = 0.0;
    for j in 0..n {
        let th = (j as f64 + 0.5) * h;
        let (sn, cs) = th.sin_cos();
        // columns of a_t r_θ
        let mut u = PlanarVector::new(et * cs, emt * sn);
        let mut w = PlanarVector::new(-et * sn, emt * cs);
        if u.norm_sq() > w.norm_sq() {
            std::mem::swap(&mut u, &mut w);
        }
        loop {
            let m = (u.dot(w) / u.norm_sq()).round();
            w = w - u * m;
            if w.norm_sq() >= u.norm_sq() {
                break;
            }
            std::mem::swap(&mut u, &mut w);
        }
        sum += u.norm().powf(-alpha);
    }
    sum / n as f64
}

fn c9_integrability() -> Outcome {
    let alpha = 1.5;
    let grid: Vec<f64> = (0..=16).map(|i| 0.5 * i as f64).collect();
    let rows = integrability_probe(alpha, &grid, &TranslationSurface::unit_torus(), 256).unwrap();
    let sup = rows.last().unwrap().running_sup;
    let last = rows.last().unwrap().value;
    let finite = rows.iter().all(|r| r.value.is_finite());
    let stable = (sup - last) / sup <= 0.05;
    let mut worst: f64 = 0.0;
    for r in rows.iter().filter(|r| r.t.fract() == 0.0) {
        let o = systole_average_oracle(r.t, alpha);
        worst = worst.max((r.value - o).abs() / o);
    }
    Outcome {
        pass: finite && stable && worst <= 0.01,
        detail: format!("sup {sup:.4}, last {last:.4}, worst oracle deviation {worst:.2e} at integer t"),
    }
}

fn c10_ellipse_uniformity() -> Outcome {
    let s = TranslationSurface::unit_torus();
    let sec = SectorSpec::full();
    let grid = log_grid(20.0, 200.0, 40);
    let gs = [
        GroupElement::IDENTITY,
        a_t(1.0),
        GroupElement::new(1.0, 2.5, 0.0, 1.0).unwrap(),
        r_theta(0.7) * a_t(-0.8),
        GroupElement::new(2.0, 1.0, 1.0, 1.0).unwrap(),
        GroupElement::new(0.5, -1.5, 0.5, 0.5).unwrap(),
    ];
    let h = enumerate(&s, 800.0).unwrap();
    let mut fits = Vec::new();
    for g in &gs {
        let norm = g.operator_norm();
        assert!(norm <= 4.0, "test matrix with norm {norm}");
        let series: Vec<(f64, f64)> = grid
            .iter()
            .map(|&t| (t, count_ellipse(&h, t, g, &sec).unwrap() as f64))
            .collect();
        fits.push(fit_growth(&series, &sec).unwrap().c_hat);
    }
    let base = fits[0];
    let worst = fits[1..].iter().map(|c| (c - base).abs() / base).fold(0.0, f64::max);
    Outcome {
        pass: worst <= 0.03,
        detail: format!("c_hat identity {base:.5}, worst relative spread {worst:.2e} over 5 matrices"),
    }
}

type Criterion = (&'static str, f64, Box<dyn Fn() -> Outcome>);

fn main() {
    let c_oracle = primitive_density(20_000);
    let criteria: Vec<Criterion> = vec![
        ("torus exactness", 10.0, Box::new(c1_torus_exactness)),
        ("engine agreement", 60.0, Box::new(c2_engine_agreement)),
        ("quadratic growth", 30.0, Box::new(move || c3_quadratic_growth(c_oracle))),
        ("sector proportionality", f64::INFINITY, Box::new(c4_sector_proportionality)),
        ("sandwich", f64::INFINITY, Box::new(c5_sandwich)),
        ("Siegel-Veech Monte Carlo", 60.0, Box::new(move || c6_siegel_veech(c_oracle))),
        ("exponent ledger", f64::INFINITY, Box::new(c7_exponent_ledger)),
        ("commutation", f64::INFINITY, Box::new(c8_commutation)),
        ("integrability probe", f64::INFINITY, Box::new(c9_integrability)),
        ("ellipse uniformity", f64::INFINITY, Box::new(c10_ellipse_uniformity)),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let pass = out.pass && secs < *budget;
        if !pass {
            failed += 1;
        }
        let limit = if budget.is_finite() { format!(" (limit {budget} s)") } else { String::new() };
        println!(
            "{} {:>2}. {name}: {} [{secs:.2} s{limit}]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
