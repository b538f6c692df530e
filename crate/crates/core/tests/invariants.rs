use std::f64::consts::TAU;

use proptest::prelude::*;

use flatcount::averaging::smoothing::{BumpSign, Region, RegionIndicator, SmoothBump};
use flatcount::averaging::{sandwich_check, theta_t};
use flatcount::counting::{count_ellipse, count_sector, fit_growth, SectorSpec};
use flatcount::exponents::{eta, kappa_step3, lambda_prime};
use flatcount::planar::PlanarFunction;
use flatcount::saddle::{enumerate, HolonomySet};
use flatcount::sampling::sample_torus;
use flatcount::surface::{a_t, r_theta, GroupElement, PlanarVector, TranslationSurface};

fn group() -> impl Strategy<Value = GroupElement> {
    (0.0..TAU, -0.8f64..0.8, -1.0f64..1.0).prop_map(|(phi, t, s)| {
        r_theta(phi) * a_t(t) * GroupElement::new(1.0, s, 0.0, 1.0).unwrap()
    })
}

fn surface() -> impl Strategy<Value = TranslationSurface> {
    prop_oneof![
        Just(TranslationSurface::unit_torus()),
        Just(TranslationSurface::l_origami()),
    ]
}

fn has_negation(h: &HolonomySet) -> bool {
    let vs: Vec<PlanarVector> = h.holonomies().collect();
    vs.iter().all(|v| vs.iter().any(|w| (*v + *w).norm() < 1e-9))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn holonomies_are_symmetric(s in surface(), g in group()) {
        let h = enumerate(&s.apply_group(&g), 4.0).unwrap();
        prop_assert!(has_negation(&h));
        prop_assert!(h.holonomies().all(|v| v.norm() <= 4.0));
    }

    #[test]
    fn group_action_is_equivariant(s in surface(), g in group()) {
        // N(g·s, T) counts v in s with |g v| <= T
        let t = 5.0;
        let gs = s.apply_group(&g);
        let direct = count_sector(&enumerate(&gs, t).unwrap(), t, &SectorSpec::full()).unwrap();
        let base = enumerate(&s, t * g.operator_norm() * 1.001).unwrap();
        let via = count_ellipse(&base, t, &g, &SectorSpec::full()).unwrap();
        prop_assert_eq!(direct, via);
    }

    #[test]
    fn sector_counts_add(s in surface(), a in 0.0..TAU, w1 in 0.0..3.0f64, w2 in 0.0..3.0f64) {
        let t = 8.0;
        let h = enumerate(&s, t).unwrap();
        let n = |p: f64, q: f64| count_sector(&h, t, &SectorSpec::new(p, q).unwrap()).unwrap();
        prop_assert_eq!(n(a, a + w1) + n(a + w1, a + w1 + w2), n(a, a + w1 + w2));
    }

    #[test]
    fn counts_are_monotone(s in surface(), t1 in 0.5..6.0f64, dt in 0.0..3.0f64) {
        let h = enumerate(&s, t1 + dt).unwrap();
        let full = SectorSpec::full();
        prop_assert!(count_sector(&h, t1, &full).unwrap() <= count_sector(&h, t1 + dt, &full).unwrap());
    }

    #[test]
    fn sandwich_holds(seed in 0u64..1000, t in 0.0..2.5f64, theta in 0.02..0.9f64, a in 0.0..TAU, w in 0.0..1.0f64) {
        let s = sample_torus(seed, 1).unwrap()[0].surface();
        let width = 2.0 * theta + w * (TAU - 2.0 * theta);
        let sec = SectorSpec::new(a, a + width).unwrap();
        let h = enumerate(&s, flatcount::averaging::sandwich::required_radius(t, theta)).unwrap();
        let r = sandwich_check(&h, t, theta, &sec).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
        prop_assert!((r.theta_t - theta_t(theta, t)).abs() < 1e-15);
    }

    #[test]
    fn smoothed_functions_bracket_regions(theta in 0.05..0.95f64, x in -2.0..2.0f64, y in -0.5..2.0f64) {
        let v = PlanarVector::new(x, y);
        let lo = SmoothBump::new(theta, BumpSign::Minus).unwrap().value(v);
        let hi = SmoothBump::new(theta, BumpSign::Plus).unwrap().value(v);
        let ind = |w| RegionIndicator::new(theta, w).unwrap().value(v);
        prop_assert!(lo <= ind(Region::S1));
        prop_assert!(ind(Region::S1) <= ind(Region::W1));
        prop_assert!(ind(Region::W1) <= ind(Region::W2));
        prop_assert!(ind(Region::W2) <= ind(Region::S2));
        prop_assert!(ind(Region::S2) <= hi);
    }

    #[test]
    fn torus_samples_are_unimodular(seed in any::<u64>()) {
        for s in sample_torus(seed, 16).unwrap() {
            prop_assert!(s.x.abs() <= 0.5 && s.x * s.x + s.y * s.y >= 1.0);
            let (b1, b2) = s.basis();
            prop_assert!((b1.cross(b2) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn kappa_monotone(lambda in 0.05..1.0f64, e1 in 0.01..0.4f64, de in 0.001..0.1f64, a1 in 1.0..1.5f64, b in 0.05..0.9f64, db in 0.001..0.1f64) {
        let et = eta(lambda).unwrap();
        let k = |eta1, beta| kappa_step3(lambda, et, eta1, a1, beta).unwrap();
        prop_assert!(k(e1 + de, b) < k(e1, b));
        prop_assert!(k(e1, b + db) > k(e1, b));
    }

    #[test]
    fn lambda_prime_in_unit_interval(len in 1e-6..0.999f64, extra in 1e-3..50.0f64, lambda in 0.0..1.0f64) {
        let t = 0.5 * (1.0 / len).ln() + extra;
        let lp = lambda_prime(t, len, lambda).unwrap();
        prop_assert!(lp > 0.0 && lp < 1.0);
    }

    #[test]
    fn fit_scales_linearly(c in 0.1..5.0f64, k in 0.5..3.0f64) {
        let series: Vec<(f64, f64)> = (0..20)
            .map(|i| {
                let t = 10.0 * 1.15f64.powi(i);
                (t, c * std::f64::consts::PI * t * t + 3.0 * t)
            })
            .collect();
        let scaled: Vec<(f64, f64)> = series.iter().map(|&(t, n)| (t, k * n)).collect();
        let a = fit_growth(&series, &SectorSpec::full()).unwrap();
        let b = fit_growth(&scaled, &SectorSpec::full()).unwrap();
        prop_assert!((b.c_hat - k * a.c_hat).abs() <= 1e-9 * b.c_hat.abs());
    }
}

#[test]
fn full_sector_count_on_torus_matches_known_values() {
    let h = enumerate(&TranslationSurface::unit_torus(), 2.0).unwrap();
    let full = SectorSpec::full();
    assert_eq!(count_sector(&h, 0.5, &full).unwrap(), 0);
    assert_eq!(count_sector(&h, 1.0, &full).unwrap(), 4);
    assert_eq!(count_sector(&h, 2.0, &full).unwrap(), 8);
}
