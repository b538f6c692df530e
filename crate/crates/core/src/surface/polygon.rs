//! Polygon-glued surfaces: validation, triangulation and vertex classes.
//!
//! Polygons are triangulated by ear clipping. Triangle `t` has vertices
//! `v[0], v[1], v[2]` in counterclockwise order; edge `k` runs from `v[k]` to
//! `v[k+1]`. Every triangle edge is glued to exactly one other triangle edge
//! with the opposite orientation, so `glue[t][k] = (t', k')` means that
//! `t.v[k]` matches `t'.v[k'+1]` and `t.v[k+1]` matches `t'.v[k']`.
//!
//! A corner `(t, k)` is the wedge at `v[k]` from the direction of edge `k`
//! counterclockwise up to (not including) the direction of `v[k+2]`. The
//! counterclockwise successor of corner `(t, k)` is `glue[t][k+2]`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::surface::geom::PlanarVector;
use crate::surface::origami::Origami;

/// Edge-matching tolerance for float polygon data.
pub const EDGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Triangle {
    pub v: [PlanarVector; 3],
    pub glue: [(usize, usize); 3],
}

#[derive(Debug, Clone, Copy)]
pub struct CornerInfo {
    /// Vertex class (singularity id).
    pub class: usize,
    /// Accumulated counterclockwise angle from the class origin direction to
    /// this corner's first edge.
    pub offset: f64,
    /// Interior angle of the corner.
    pub angle: f64,
}

#[derive(Debug, Clone)]
pub struct VertexClass {
    pub multiplicity: usize,
    /// Origin corner of sheet bookkeeping.
    pub origin: (usize, usize),
    /// Angle of the origin corner's first edge, in `[0, 2π)`.
    pub origin_angle: f64,
}

#[derive(Debug, Clone)]
pub struct PolygonComplex {
    pub polygons: Vec<Vec<PlanarVector>>,
    pub gluings: Vec<[[usize; 2]; 2]>,
    pub triangles: Vec<Triangle>,
    pub corners: Vec<[CornerInfo; 3]>,
    pub classes: Vec<VertexClass>,
    pub area: f64,
    pub genus: usize,
}

fn signed_area(poly: &[PlanarVector]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>() / 2.0
}

fn segments_intersect(a: PlanarVector, b: PlanarVector, c: PlanarVector, d: PlanarVector) -> bool {
    let o1 = (b - a).cross(c - a);
    let o2 = (b - a).cross(d - a);
    let o3 = (d - c).cross(a - c);
    let o4 = (d - c).cross(b - c);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    let on = |p: PlanarVector, q: PlanarVector, r: PlanarVector, o: f64| {
        o == 0.0 && r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

/// Closed-triangle containment for counterclockwise `a, b, c`.
fn in_closed_triangle(p: PlanarVector, a: PlanarVector, b: PlanarVector, c: PlanarVector) -> bool {
    (b - a).cross(p - a) >= 0.0 && (c - b).cross(p - b) >= 0.0 && (a - c).cross(p - c) >= 0.0
}

/// Ear clipping. Returns triangles as triples of polygon vertex indices.
fn ear_clip(poly: &[PlanarVector], which: usize) -> Result<Vec<[usize; 3]>> {
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut out = Vec::with_capacity(poly.len() - 2);
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for i in 0..m {
            let (a, b, c) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
            let (pa, pb, pc) = (poly[a], poly[b], poly[c]);
            if (pb - pa).cross(pc - pa) <= 0.0 {
                continue;
            }
            let blocked = idx
                .iter()
                .filter(|&&j| j != a && j != b && j != c)
                .any(|&j| in_closed_triangle(poly[j], pa, pb, pc));
            if blocked {
                continue;
            }
            out.push([a, b, c]);
            idx.remove(i);
            clipped = true;
            break;
        }
        if !clipped {
            return Err(Error::MalformedSpec(format!("polygon {which} cannot be triangulated")));
        }
    }
    let (a, b, c) = (idx[0], idx[1], idx[2]);
    if (poly[b] - poly[a]).cross(poly[c] - poly[a]) <= 0.0 {
        return Err(Error::MalformedSpec(format!("polygon {which} is degenerate")));
    }
    out.push([a, b, c]);
    Ok(out)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl PolygonComplex {
    /// Validates and triangulates a polygon surface. Singularity ids follow
    /// the first occurrence of each vertex class in polygon order.
    pub fn new(polygons: Vec<Vec<PlanarVector>>, gluings: Vec<[[usize; 2]; 2]>) -> Result<Self> {
        Self::build(polygons, gluings, None)
    }

    pub(crate) fn from_origami(o: &Origami) -> Result<Self> {
        let sq = |i: usize| {
            let _ = i;
            vec![
                PlanarVector::new(0.0, 0.0),
                PlanarVector::new(1.0, 0.0),
                PlanarVector::new(1.0, 1.0),
                PlanarVector::new(0.0, 1.0),
            ]
        };
        let polygons = (0..o.n()).map(sq).collect();
        let mut gluings = Vec::with_capacity(2 * o.n());
        for i in 0..o.n() {
            gluings.push([[i, 1], [o.h()[i], 3]]);
            gluings.push([[i, 2], [o.v()[i], 0]]);
        }
        let origins = o.cycles().iter().map(|c| (c[0], 0)).collect();
        Self::build(polygons, gluings, Some(origins))
    }

    fn build(
        polygons: Vec<Vec<PlanarVector>>,
        gluings: Vec<[[usize; 2]; 2]>,
        origins: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        if polygons.is_empty() {
            return Err(Error::MalformedSpec("no polygons".into()));
        }
        for (p, poly) in polygons.iter().enumerate() {
            if poly.len() < 3 {
                return Err(Error::MalformedSpec(format!("polygon {p} has fewer than 3 vertices")));
            }
            if !poly.iter().all(|v| v.is_finite()) {
                return Err(Error::MalformedSpec(format!("polygon {p} has non-finite coordinates")));
            }
            if signed_area(poly) <= 0.0 {
                return Err(Error::MalformedSpec(format!(
                    "polygon {p} is not counterclockwise"
                )));
            }
            let n = poly.len();
            for i in 0..n {
                for j in (i + 1)..n {
                    if j == i + 1 || (i == 0 && j == n - 1) {
                        continue;
                    }
                    if segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]) {
                        return Err(Error::MalformedSpec(format!("polygon {p} is not simple")));
                    }
                }
            }
        }

        // edge pairing
        let offsets: Vec<usize> = polygons
            .iter()
            .scan(0, |acc, p| {
                let o = *acc;
                *acc += p.len();
                Some(o)
            })
            .collect();
        let total_edges: usize = polygons.iter().map(|p| p.len()).sum();
        let mut partner = vec![usize::MAX; total_edges];
        let edge_vec = |p: usize, e: usize| {
            let poly = &polygons[p];
            poly[(e + 1) % poly.len()] - poly[e]
        };
        for g in &gluings {
            let [[p1, e1], [p2, e2]] = *g;
            for &(p, e) in &[(p1, e1), (p2, e2)] {
                if p >= polygons.len() || e >= polygons[p].len() {
                    return Err(Error::MalformedSpec(format!("gluing refers to missing edge ({p},{e})")));
                }
            }
            let (k1, k2) = (offsets[p1] + e1, offsets[p2] + e2);
            if k1 == k2 {
                return Err(Error::NonMatchingEdge {
                    p1,
                    e1,
                    p2,
                    e2,
                    reason: "edge glued to itself".into(),
                });
            }
            if partner[k1] != usize::MAX || partner[k2] != usize::MAX {
                return Err(Error::MalformedSpec(format!(
                    "edge ({p1},{e1}) or ({p2},{e2}) is glued more than once"
                )));
            }
            let (a, b) = (edge_vec(p1, e1), edge_vec(p2, e2));
            let reason = if (a.norm() - b.norm()).abs() > EDGE_TOLERANCE {
                Some(format!("lengths {} and {} differ", a.norm(), b.norm()))
            } else if (a + b).norm() > EDGE_TOLERANCE {
                Some("edges are not parallel with opposite orientation".to_string())
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(Error::NonMatchingEdge { p1, e1, p2, e2, reason });
            }
            partner[k1] = k2;
            partner[k2] = k1;
        }
        if let Some(k) = partner.iter().position(|&x| x == usize::MAX) {
            let p = offsets.iter().rposition(|&o| o <= k).unwrap();
            return Err(Error::MalformedSpec(format!("edge ({p},{}) is not glued", k - offsets[p])));
        }

        // connectivity
        let mut parent: Vec<usize> = (0..polygons.len()).collect();
        for g in &gluings {
            let (a, b) = (find(&mut parent, g[0][0]), find(&mut parent, g[1][0]));
            parent[a] = b;
        }
        let components = (0..polygons.len()).filter(|&p| find(&mut parent, p) == p).count();
        if components != 1 {
            return Err(Error::DisconnectedSurface { components });
        }

        // triangulate; key every directed triangle edge by polygon vertex pair
        let mut triangles = Vec::new();
        let mut tri_of_poly_edge = vec![(0usize, 0usize); total_edges];
        let mut diagonal = std::collections::HashMap::new();
        let mut raw = Vec::new();
        for (p, poly) in polygons.iter().enumerate() {
            let n = poly.len();
            for tri in ear_clip(poly, p)? {
                let t = raw.len();
                for k in 0..3 {
                    let (a, b) = (tri[k], tri[(k + 1) % 3]);
                    if b == (a + 1) % n {
                        tri_of_poly_edge[offsets[p] + a] = (t, k);
                    } else {
                        diagonal.insert((p, a, b), (t, k));
                    }
                }
                raw.push((p, tri));
            }
        }
        for (t, &(p, tri)) in raw.iter().enumerate() {
            let poly = &polygons[p];
            let n = poly.len();
            let mut glue = [(0, 0); 3];
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                glue[k] = if b == (a + 1) % n {
                    tri_of_poly_edge[partner[offsets[p] + a]]
                } else {
                    diagonal[&(p, b, a)]
                };
            }
            let _ = t;
            triangles.push(Triangle {
                v: [poly[tri[0]], poly[tri[1]], poly[tri[2]]],
                glue,
            });
        }

        // vertex classes: cycles of the counterclockwise corner successor
        let nt = triangles.len();
        let corner_angle = |t: usize, k: usize| {
            let tr: &Triangle = &triangles[t];
            let a = tr.v[(k + 1) % 3] - tr.v[k];
            let b = tr.v[(k + 2) % 3] - tr.v[k];
            a.cross(b).atan2(a.dot(b))
        };
        let succ = |t: usize, k: usize| triangles[t].glue[(k + 2) % 3];

        // origin corners in id order
        let origin_corners: Vec<(usize, usize)> = match origins {
            Some(list) => list
                .iter()
                .map(|&(p, j)| tri_of_poly_edge[offsets[p] + j])
                .collect(),
            None => {
                let mut seen = vec![[false; 3]; nt];
                let mut list = Vec::new();
                for (p, poly) in polygons.iter().enumerate() {
                    for j in 0..poly.len() {
                        let c0 = tri_of_poly_edge[offsets[p] + j];
                        if seen[c0.0][c0.1] {
                            continue;
                        }
                        let mut c = c0;
                        loop {
                            seen[c.0][c.1] = true;
                            c = succ(c.0, c.1);
                            if c == c0 {
                                break;
                            }
                        }
                        list.push(c0);
                    }
                }
                list
            }
        };

        let placeholder = CornerInfo {
            class: usize::MAX,
            offset: 0.0,
            angle: 0.0,
        };
        let mut corners = vec![[placeholder; 3]; nt];
        let mut classes = Vec::new();
        for (id, &c0) in origin_corners.iter().enumerate() {
            let mut c = c0;
            let mut acc = 0.0;
            loop {
                if corners[c.0][c.1].class != usize::MAX {
                    return Err(Error::MalformedSpec("inconsistent vertex classes".into()));
                }
                let ang = corner_angle(c.0, c.1);
                corners[c.0][c.1] = CornerInfo {
                    class: id,
                    offset: acc,
                    angle: ang,
                };
                acc += ang;
                c = succ(c.0, c.1);
                if c == c0 {
                    break;
                }
            }
            let m = acc / TAU;
            if (m - m.round()).abs() > 1e-6 || m.round() < 1.0 {
                return Err(Error::MalformedSpec(format!(
                    "cone angle {acc} at vertex class {id} is not a positive multiple of 2π"
                )));
            }
            let tr = &triangles[c0.0];
            classes.push(VertexClass {
                multiplicity: m.round() as usize,
                origin: c0,
                origin_angle: (tr.v[(c0.1 + 1) % 3] - tr.v[c0.1]).angle(),
            });
        }
        if corners.iter().flatten().any(|c| c.class == usize::MAX) {
            return Err(Error::MalformedSpec("vertex class origins do not cover all corners".into()));
        }

        let area: f64 = polygons.iter().map(|p| signed_area(p)).sum();
        let v = classes.len() as i64;
        let e = (total_edges / 2) as i64;
        let f = polygons.len() as i64;
        let chi = v - e + f;
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(Error::MalformedSpec(format!("Euler characteristic {chi} is not that of a closed orientable surface")));
        }
        let genus = ((2 - chi) / 2) as usize;
        let gb: i64 = classes.iter().map(|c| c.multiplicity as i64 - 1).sum();
        if gb != 2 * genus as i64 - 2 {
            return Err(Error::MalformedSpec("cone angles violate Gauss-Bonnet".into()));
        }

        Ok(PolygonComplex {
            polygons,
            gluings,
            triangles,
            corners,
            classes,
            area,
            genus,
        })
    }

    /// Separatrix index of the direction `dir` leaving corner `(t, k)`, where
    /// `dir` lies in the corner's half-open wedge.
    pub fn separatrix(&self, t: usize, k: usize, dir: PlanarVector) -> usize {
        let info = self.corners[t][k];
        let class = &self.classes[info.class];
        let tr = &self.triangles[t];
        let e1 = tr.v[(k + 1) % 3] - tr.v[k];
        let mut rel = e1.cross(dir).atan2(e1.dot(dir));
        if rel < 0.0 {
            rel = 0.0;
        }
        let acc = info.offset + rel + class.origin_angle;
        let mut x = acc / TAU;
        if (x - x.round()).abs() < 1e-9 {
            x = x.round();
        }
        let shift = if class.origin_angle > 0.0 { 1 } else { 0 };
        let m = class.multiplicity as i64;
        ((x.floor() as i64 - shift).rem_euclid(m)) as usize
    }
}
