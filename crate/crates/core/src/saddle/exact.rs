//! Exact enumeration on square-tiled surfaces.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::saddle::{check_radius, HolonomySet, SaddleConnection, SetKind};
use crate::surface::{PlanarVector, TranslationSurface};

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Primitive integer vectors `(p, q)` with `q > 0`, or `q = 0, p = 1`, and
/// `|(p, q)| <= t`, grouped by row `q`.
pub(crate) fn primitive_half_rows(t: f64) -> Vec<Vec<(i64, i64)>> {
    if !(t >= 1.0) {
        return Vec::new();
    }
    let qmax = t.floor() as i64;
    (0..=qmax)
        .map(|q| {
            if q == 0 {
                return vec![(1, 0)];
            }
            let rem = t * t - (q * q) as f64;
            let mut pmax = rem.max(0.0).sqrt().floor() as i64 + 1;
            while pmax >= 0 && PlanarVector::new(pmax as f64, q as f64).norm() > t {
                pmax -= 1;
            }
            (-pmax..=pmax)
                .filter(|&p| gcd(p.unsigned_abs(), q as u64) == 1)
                .map(|p| (p, q))
                .collect()
        })
        .collect()
}

/// Traces every outgoing separatrix in every primitive direction whose image
/// under the surface frame has norm at most `t`.
pub fn enumerate_exact(s: &TranslationSurface, t: f64) -> Result<HolonomySet> {
    check_radius(t)?;
    let (o, [a, b, c, d]) = s.integral_origami().ok_or_else(|| {
        Error::InvalidArgument("exact enumeration needs a square-tiled surface with integer frame".into())
    })?;
    let n = o.n();
    let rows = primitive_half_rows(t);
    let elements: Vec<SaddleConnection> = rows
        .par_iter()
        .flat_map_iter(|row| {
            let mut out = Vec::with_capacity(row.len() * 2 * n);
            for &(p, q) in row {
                // base direction g⁻¹(p, q)
                let (bp, bq) = (d * p - b * q, -c * p + a * q);
                let w = PlanarVector::new(p as f64, q as f64);
                for sheet in 0..n {
                    let tr = o.trace(sheet, bp, bq);
                    let (start, sep) = o.sheet(tr.start_sheet);
                    let (end, end_sep) = o.sheet(tr.end_sheet);
                    out.push(SaddleConnection {
                        holonomy: w,
                        start,
                        end,
                        separatrix: sep,
                    });
                    out.push(SaddleConnection {
                        holonomy: -w,
                        start: end,
                        end: start,
                        separatrix: end_sep,
                    });
                }
            }
            out
        })
        .collect();
    Ok(HolonomySet::new(elements, t, s, SetKind::SaddleConnections))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::GroupElement;

    #[test]
    fn torus_small_radii() {
        let s = TranslationSurface::unit_torus();
        assert_eq!(enumerate_exact(&s, 1.0).unwrap().len(), 4);
        assert_eq!(enumerate_exact(&s, 0.5).unwrap().len(), 0);
        assert_eq!(enumerate_exact(&s, 2.0).unwrap().len(), 8);
        assert_eq!(enumerate_exact(&s, 0.0).unwrap().len(), 0);
    }

    #[test]
    fn l_origami_multiplicity_three_per_direction() {
        let s = TranslationSurface::l_origami();
        let h = enumerate_exact(&s, 5.0).unwrap();
        let torus = enumerate_exact(&TranslationSurface::unit_torus(), 5.0).unwrap();
        assert_eq!(h.len(), 3 * torus.len());
        assert!(h.elements().iter().all(|e| e.separatrix < 3));
    }

    #[test]
    fn integer_frame_is_equivariant() {
        let s = TranslationSurface::l_origami();
        let g = GroupElement::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let gs = s.apply_group(&g);
        let t = 6.0;
        let lhs = enumerate_exact(&gs, t).unwrap();
        let big = enumerate_exact(&s, t * g.inverse().operator_norm() + 1e-9).unwrap();
        let mut rhs: Vec<_> = big
            .elements()
            .iter()
            .map(|e| g.apply(e.holonomy))
            .filter(|v| v.norm() <= t)
            .map(|v| (v.x.round() as i64, v.y.round() as i64))
            .collect();
        let mut got: Vec<_> = lhs
            .elements()
            .iter()
            .map(|e| (e.holonomy.x as i64, e.holonomy.y as i64))
            .collect();
        rhs.sort_unstable();
        got.sort_unstable();
        assert_eq!(got, rhs);
    }
}
