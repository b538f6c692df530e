//! One-point tori: saddle connections are the primitive lattice vectors.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::saddle::exact::gcd;
use crate::saddle::{check_radius, HolonomySet, SaddleConnection, SetKind};
use crate::surface::{PlanarVector, TranslationSurface};

/// Lagrange–Gauss reduction of a lattice basis.
pub fn reduce_basis(mut b1: PlanarVector, mut b2: PlanarVector) -> (PlanarVector, PlanarVector) {
    if b1.norm_sq() > b2.norm_sq() {
        std::mem::swap(&mut b1, &mut b2);
    }
    loop {
        let mu = (b1.dot(b2) / b1.norm_sq()).round();
        b2 = b2 - b1 * mu;
        if b2.norm_sq() >= b1.norm_sq() {
            return (b1, b2);
        }
        std::mem::swap(&mut b1, &mut b2);
    }
}

/// Length of a shortest nonzero lattice vector.
pub fn shortest_vector(b1: PlanarVector, b2: PlanarVector) -> f64 {
    let (r1, _) = reduce_basis(b1, b2);
    r1.norm()
}

fn row_bounds(b1: PlanarVector, b2: PlanarVector, t: f64) -> (i64, i64) {
    let det = b1.cross(b2).abs();
    let imax = (t * b2.norm() / det).floor() as i64 + 1;
    let jmax = (t * b1.norm() / det).floor() as i64 + 1;
    (imax, jmax)
}

fn for_each_in_row(b1: PlanarVector, b2: PlanarVector, imax: i64, j: i64, t: f64, mut f: impl FnMut(PlanarVector)) {
    for i in -imax..=imax {
        if gcd(i.unsigned_abs(), j.unsigned_abs()) != 1 {
            continue;
        }
        let v = b1 * i as f64 + b2 * j as f64;
        if v.norm() <= t {
            f(v);
        }
    }
}

/// Primitive vectors `i·b1 + j·b2` of norm at most `t`.
pub fn primitive_vectors(b1: PlanarVector, b2: PlanarVector, t: f64) -> Vec<PlanarVector> {
    let (b1, b2) = reduce_basis(b1, b2);
    let (imax, jmax) = row_bounds(b1, b2, t);
    let mut out = Vec::new();
    for j in -jmax..=jmax {
        for_each_in_row(b1, b2, imax, j, t, |v| out.push(v));
    }
    out
}

/// `Σ f(v)` over primitive vectors of norm at most `t`, without storing
/// them. Rows are summed in parallel and combined in a fixed order.
pub fn sum_primitive<F>(b1: PlanarVector, b2: PlanarVector, t: f64, f: F) -> f64
where
    F: Fn(PlanarVector) -> f64 + Sync,
{
    let (b1, b2) = reduce_basis(b1, b2);
    let (imax, jmax) = row_bounds(b1, b2, t);
    let rows: Vec<f64> = (-jmax..=jmax)
        .into_par_iter()
        .map(|j| {
            let mut acc = 0.0;
            for_each_in_row(b1, b2, imax, j, t, |v| acc += f(v));
            acc
        })
        .collect();
    rows.iter().sum()
}

pub fn enumerate_lattice(s: &TranslationSurface, t: f64) -> Result<HolonomySet> {
    check_radius(t)?;
    let (b1, b2) = s
        .torus_lattice()
        .ok_or_else(|| Error::InvalidArgument("lattice enumeration needs a one-point torus".into()))?;
    let elements = primitive_vectors(b1, b2, t)
        .into_iter()
        .map(|holonomy| SaddleConnection {
            holonomy,
            start: 0,
            end: 0,
            separatrix: 0,
        })
        .collect();
    Ok(HolonomySet::new(elements, t, s, SetKind::SaddleConnections))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::a_t;

    #[test]
    fn reduction_finds_short_vector() {
        let b1 = PlanarVector::new(1.0, 0.0);
        let b2 = PlanarVector::new(17.0, 1.0);
        let (r1, r2) = reduce_basis(b1, b2);
        assert_eq!(r1.norm(), 1.0);
        assert_eq!(r2.norm(), 1.0);
    }

    #[test]
    fn stretched_torus_counts() {
        let s = TranslationSurface::unit_torus().apply_group(&a_t(2f64.ln()));
        let h = enumerate_lattice(&s, 1.0).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(enumerate_lattice(&s, 3.0).unwrap().len(), {
            let mut k = 0;
            for p in -10i64..=10 {
                for q in -10i64..=10 {
                    if gcd(p.unsigned_abs(), q.unsigned_abs()) == 1
                        && PlanarVector::new(2.0 * p as f64, 0.5 * q as f64).norm() <= 3.0
                    {
                        k += 1;
                    }
                }
            }
            k
        });
    }
}
