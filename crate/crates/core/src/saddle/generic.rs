//! Enumeration by developing triangles inside a visibility wedge.
//!
//! Development runs in base coordinates of the polygon complex; the surface
//! frame is applied only to norms and emitted holonomies. Orientation tests
//! are invariant under orientation-preserving linear maps, so wedge decisions
//! do not depend on the frame.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::saddle::{check_radius, HolonomySet, SaddleConnection, SetKind};
use crate::surface::polygon::PolygonComplex;
use crate::surface::{GroupElement, PlanarVector, TranslationSurface};

/// Relative cross products at most this are treated as exact collinearity.
pub const SNAP_TOLERANCE: f64 = 1e-13;
/// Relative cross products in `(SNAP_TOLERANCE, BREAKDOWN_TOLERANCE]` cannot
/// be decided reliably in double precision.
pub const BREAKDOWN_TOLERANCE: f64 = 1e-12;

fn side(a: PlanarVector, b: PlanarVector) -> Result<i8> {
    let cr = a.cross(b);
    let scale = a.norm() * b.norm();
    let rel = if scale > 0.0 { cr / scale } else { 0.0 };
    if rel.abs() <= SNAP_TOLERANCE {
        Ok(0)
    } else if rel.abs() <= BREAKDOWN_TOLERANCE {
        Err(Error::ToleranceBreakdown { cross: rel })
    } else if rel > 0.0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

fn segment_distance(p: PlanarVector, q: PlanarVector) -> f64 {
    let d = q - p;
    let len2 = d.norm_sq();
    if len2 == 0.0 {
        return p.norm();
    }
    let s = (-p.dot(d) / len2).clamp(0.0, 1.0);
    (p + d * s).norm()
}

/// Distance from the origin, after the frame, to the part of segment `pq`
/// inside the closed wedge between rays `lo` and `hi`.
fn clipped_distance(p: PlanarVector, q: PlanarVector, lo: PlanarVector, hi: PlanarVector, g: &GroupElement) -> f64 {
    let d = q - p;
    let (mut s0, mut s1) = (0.0f64, 1.0f64);
    // cross(lo, p + s d) >= 0 and cross(p + s d, hi) >= 0, both linear in s
    for (c0, c1) in [(lo.cross(p), lo.cross(d)), (p.cross(hi), d.cross(hi))] {
        if c1 > 0.0 {
            s0 = s0.max(-c0 / c1);
        } else if c1 < 0.0 {
            s1 = s1.min(-c0 / c1);
        }
    }
    if s0 > s1 {
        let m = 0.5 * (s0 + s1);
        s0 = m.clamp(0.0, 1.0);
        s1 = s0;
    }
    segment_distance(g.apply(p + d * s0), g.apply(p + d * s1))
}

struct Item {
    tri: usize,
    edge: usize,
    p: PlanarVector,
    q: PlanarVector,
    lo: PlanarVector,
    hi: PlanarVector,
}

fn develop_corner(
    c: &PolygonComplex,
    g: &GroupElement,
    t0: usize,
    k0: usize,
    radius: f64,
) -> Result<Vec<SaddleConnection>> {
    let mut out = Vec::new();
    let tr = &c.triangles[t0];
    let o = tr.v[k0];
    let a = tr.v[(k0 + 1) % 3] - o;
    let b = tr.v[(k0 + 2) % 3] - o;
    let start = c.corners[t0][k0].class;

    let emit = |out: &mut Vec<SaddleConnection>, dir: PlanarVector, end_corner: (usize, usize)| {
        out.push(SaddleConnection {
            holonomy: g.apply(dir),
            start,
            end: c.corners[end_corner.0][end_corner.1].class,
            separatrix: c.separatrix(t0, k0, dir),
        });
    };

    if g.apply(a).norm() <= radius {
        emit(&mut out, a, tr.glue[k0]);
    }
    let mut stack = vec![Item {
        tri: t0,
        edge: (k0 + 1) % 3,
        p: a,
        q: b,
        lo: a,
        hi: b,
    }];
    while let Some(it) = stack.pop() {
        if clipped_distance(it.p, it.q, it.lo, it.hi, g) > radius {
            continue;
        }
        let (t2, e2) = c.triangles[it.tri].glue[it.edge];
        let nb = &c.triangles[t2];
        let apex = it.p + (nb.v[(e2 + 2) % 3] - nb.v[(e2 + 1) % 3]);
        let sl = side(it.lo, apex)?;
        let sh = side(apex, it.hi)?;
        if sl > 0 && sh > 0 && g.apply(apex).norm() <= radius {
            emit(&mut out, apex, (t2, (e2 + 2) % 3));
        }
        if sl > 0 {
            stack.push(Item {
                tri: t2,
                edge: (e2 + 1) % 3,
                p: it.p,
                q: apex,
                lo: it.lo,
                hi: if sh > 0 { apex } else { it.hi },
            });
        }
        if sh > 0 {
            stack.push(Item {
                tri: t2,
                edge: (e2 + 2) % 3,
                p: apex,
                q: it.q,
                lo: if sl > 0 { apex } else { it.lo },
                hi: it.hi,
            });
        }
    }
    Ok(out)
}

/// Develops the surface from every corner of every singularity and collects
/// the singularity images visible inside the wedge.
pub fn enumerate_generic(s: &TranslationSurface, t: f64) -> Result<HolonomySet> {
    check_radius(t)?;
    let c = s.polygon_complex();
    let g = s.frame();
    let corners: Vec<(usize, usize)> = (0..c.triangles.len())
        .flat_map(|tri| (0..3).map(move |k| (tri, k)))
        .collect();
    let parts: Vec<Result<Vec<SaddleConnection>>> = corners
        .par_iter()
        .map(|&(tri, k)| develop_corner(&c, &g, tri, k, t))
        .collect();
    let mut elements = Vec::new();
    for p in parts {
        elements.extend(p?);
    }
    Ok(HolonomySet::new(elements, t, s, SetKind::SaddleConnections))
}
