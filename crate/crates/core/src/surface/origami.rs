//! Square-tiled surfaces (origamis) with exact integer tracing.
//!
//! Squares are 0-indexed internally. `h[i]` is the square to the right of
//! square `i` and `v[i]` the square above it. Every corner of every square is
//! a singularity or a marked point; corners are identified with cycles of the
//! commutator `c = v h v⁻¹ h⁻¹`, which walks counterclockwise around a vertex
//! one full turn at a time.
//!
//! A vertex of cone angle `2πm` has `m` sheets. Sheet `k` is the BL corner of
//! square `cycle[k]`; it owns the outgoing directions in `[0, 2π)` measured
//! from the east ray along the bottom edge of that square.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::surface::polygon::PolygonComplex;

/// Corner of a unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    BottomLeft,
    BottomRight,
    TopRight,
    TopLeft,
}

/// Result of tracing one outgoing separatrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trace {
    /// Square owning the start sheet.
    pub start_sheet: usize,
    /// Square owning the sheet of the reversed segment at the far end.
    pub end_sheet: usize,
}

#[derive(Debug)]
pub struct Origami {
    h: Vec<usize>,
    h_inv: Vec<usize>,
    v: Vec<usize>,
    v_inv: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    /// For each square: (vertex id, sheet index) of its bottom-left corner.
    sheet_of: Vec<(usize, usize)>,
    polygons: OnceLock<Arc<PolygonComplex>>,
}

impl Clone for Origami {
    fn clone(&self) -> Self {
        let polygons = OnceLock::new();
        if let Some(p) = self.polygons.get() {
            let _ = polygons.set(Arc::clone(p));
        }
        Origami {
            h: self.h.clone(),
            h_inv: self.h_inv.clone(),
            v: self.v.clone(),
            v_inv: self.v_inv.clone(),
            cycles: self.cycles.clone(),
            sheet_of: self.sheet_of.clone(),
            polygons,
        }
    }
}

impl PartialEq for Origami {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h && self.v == other.v
    }
}

fn parse_permutation(name: &str, n: usize, one_line: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if one_line.len() != n {
        return Err(Error::MalformedSpec(format!(
            "permutation {name} has {} entries, expected {n}",
            one_line.len()
        )));
    }
    let mut perm = Vec::with_capacity(n);
    let mut inv = vec![usize::MAX; n];
    for (i, &img) in one_line.iter().enumerate() {
        if img == 0 || img > n {
            return Err(Error::MalformedSpec(format!(
                "permutation {name} maps {} to {img}, outside 1..={n}",
                i + 1
            )));
        }
        let img = img - 1;
        if inv[img] != usize::MAX {
            return Err(Error::MalformedSpec(format!(
                "permutation {name} is not a bijection ({} is hit twice)",
                img + 1
            )));
        }
        inv[img] = i;
        perm.push(img);
    }
    Ok((perm, inv))
}

impl Origami {
    /// Builds an origami from 1-indexed one-line permutations.
    pub fn new(n: usize, h: &[usize], v: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedSpec("square-tiled surface needs n >= 1".into()));
        }
        let (h, h_inv) = parse_permutation("h", n, h)?;
        let (v, v_inv) = parse_permutation("v", n, v)?;

        // transitivity of <h, v>
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = stack.pop() {
            for j in [h[i], h_inv[i], v[i], v_inv[i]] {
                if !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    stack.push(j);
                }
            }
        }
        if reached != n {
            let mut components = 0;
            let mut seen = vec![false; n];
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                components += 1;
                let mut stack = vec![s];
                seen[s] = true;
                while let Some(i) = stack.pop() {
                    for j in [h[i], h_inv[i], v[i], v_inv[i]] {
                        if !seen[j] {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
            return Err(Error::DisconnectedSurface { components });
        }

        let mut o = Origami {
            h,
            h_inv,
            v,
            v_inv,
            cycles: Vec::new(),
            sheet_of: vec![(0, 0); n],
            polygons: OnceLock::new(),
        };
        let mut assigned = vec![false; n];
        for start in 0..n {
            if assigned[start] {
                continue;
            }
            let id = o.cycles.len();
            let mut cycle = Vec::new();
            let mut i = start;
            loop {
                assigned[i] = true;
                o.sheet_of[i] = (id, cycle.len());
                cycle.push(i);
                i = o.commutator(i);
                if i == start {
                    break;
                }
            }
            o.cycles.push(cycle);
        }
        Ok(o)
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[usize] {
        &self.h
    }

    pub fn v(&self) -> &[usize] {
        &self.v
    }

    /// `v h v⁻¹ h⁻¹`, applied right to left.
    pub fn commutator(&self, i: usize) -> usize {
        self.v[self.h[self.v_inv[self.h_inv[i]]]]
    }

    /// Vertex cycles; cycle `k` is singularity `k` with cone angle `2π·len`.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// (singularity id, sheet index) owning the BL corner of square `i`.
    pub fn sheet(&self, i: usize) -> (usize, usize) {
        self.sheet_of[i]
    }

    /// 1-indexed one-line notation, as in the JSON surface format.
    pub fn one_line(&self) -> (Vec<usize>, Vec<usize>) {
        (
            self.h.iter().map(|i| i + 1).collect(),
            self.v.iter().map(|i| i + 1).collect(),
        )
    }

    /// Sheet (square whose BL corner starts it) that owns the corner `corner`
    /// of square `s` for directions pointing into the interior of `s`.
    pub fn sheet_square(&self, s: usize, corner: Corner) -> usize {
        match corner {
            Corner::BottomLeft => s,
            Corner::BottomRight => self.h[s],
            Corner::TopRight => self.h[self.v[s]],
            Corner::TopLeft => self.h[self.v[self.h_inv[s]]],
        }
    }

    /// Square a separatrix of sheet `i` enters when leaving in a direction of
    /// the given quadrant. Quadrants are the half-open angle ranges
    /// `[kπ/2, (k+1)π/2)`.
    fn start_square(&self, i: usize, quadrant: u8) -> usize {
        match quadrant {
            0 => i,
            1 => self.h_inv[i],
            2 => self.v_inv[self.h_inv[i]],
            _ => self.h[self.v_inv[self.h_inv[i]]],
        }
    }

    /// Inverse of [`Origami::start_square`].
    fn sheet_from_start(&self, s: usize, quadrant: u8) -> usize {
        match quadrant {
            0 => s,
            1 => self.h[s],
            2 => self.h[self.v[s]],
            _ => self.h[self.v[self.h_inv[s]]],
        }
    }

    /// Traces the straight segment with primitive integer holonomy `(p, q)`
    /// leaving sheet `sheet` (a square index). Every corner is singular and
    /// `(p, q)` is primitive, so the first singularity hit is the corner at
    /// displacement `(p, q)`.
    pub fn trace(&self, sheet: usize, p: i64, q: i64) -> Trace {
        debug_assert!(p != 0 || q != 0);
        let quadrant = quadrant_of(p, q);
        let mut s = self.start_square(sheet, quadrant);

        let (ap, aq) = (p.unsigned_abs(), q.unsigned_abs());
        if self.n() > 1 {
            // Interior crossings of vertical lines at parameters j/|p| and of
            // horizontal lines at k/|q|; coprimality keeps them distinct.
            let (mut j, mut k) = (1u64, 1u64);
            while j < ap || k < aq {
                let vertical_next = if j >= ap {
                    false
                } else if k >= aq {
                    true
                } else {
                    j * aq < k * ap
                };
                if vertical_next {
                    s = if p > 0 { self.h[s] } else { self.h_inv[s] };
                    j += 1;
                } else {
                    s = if q > 0 { self.v[s] } else { self.v_inv[s] };
                    k += 1;
                }
            }
        }

        // The reversed segment leaves the far corner into `s`, except for
        // axis directions where the segment runs along an edge and the
        // reversed quadrant convention puts it in the neighbouring square.
        let rev_quadrant = quadrant_of(-p, -q);
        let rev_start = match (p.signum(), q.signum()) {
            (1, 0) => self.v_inv[s],
            (0, 1) => self.h[s],
            (-1, 0) => self.v[s],
            (0, -1) => self.h_inv[s],
            _ => s,
        };
        Trace {
            start_sheet: sheet,
            end_sheet: self.sheet_from_start(rev_start, rev_quadrant),
        }
    }

    /// Returns the permutation of the `n·q` subintervals of the bottom edges
    /// under the first-return map of the flow in direction `(p, q)`, `q > 0`.
    /// Subinterval `(s, a)` is `[a/q, (a+1)/q) × {0}` in square `s`, indexed
    /// as `s*q + a`.
    pub fn bottom_edge_return(&self, p: i64, q: i64) -> Vec<usize> {
        assert!(q > 0);
        let n = self.n();
        let qu = q as usize;
        let mut out = vec![0usize; n * qu];
        for s in 0..n {
            for a in 0..q {
                let u = a + p;
                let shift = u.div_euclid(q);
                let mut t = s;
                if shift > 0 {
                    for _ in 0..shift {
                        t = self.h[t];
                    }
                } else {
                    for _ in 0..(-shift) {
                        t = self.h_inv[t];
                    }
                }
                t = self.v[t];
                let a2 = u.rem_euclid(q) as usize;
                out[s * qu + a as usize] = t * qu + a2;
            }
        }
        out
    }

    /// Lengths of the cycles of `h` (horizontal cylinders).
    pub fn horizontal_cycle_lengths(&self) -> Vec<usize> {
        cycle_lengths(&self.h)
    }

    pub(crate) fn polygon_complex(&self) -> Arc<PolygonComplex> {
        Arc::clone(self.polygons.get_or_init(|| {
            Arc::new(PolygonComplex::from_origami(self).expect("origami converts to polygons"))
        }))
    }
}

/// Quadrant `k` holds directions with angle in `[kπ/2, (k+1)π/2)`.
pub fn quadrant_of(p: i64, q: i64) -> u8 {
    if p > 0 && q >= 0 {
        0
    } else if p <= 0 && q > 0 {
        1
    } else if p < 0 && q <= 0 {
        2
    } else {
        3
    }
}

pub fn cycle_lengths(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            len += 1;
            i = perm[i];
        }
        out.push(len);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l_origami() -> Origami {
        Origami::new(3, &[2, 1, 3], &[3, 2, 1]).unwrap()
    }

    #[test]
    fn torus_has_one_marked_point() {
        let o = Origami::new(1, &[1], &[1]).unwrap();
        assert_eq!(o.cycles(), &[vec![0]]);
    }

    #[test]
    fn l_origami_vertex_cycle() {
        let o = l_origami();
        assert_eq!(o.cycles().len(), 1);
        assert_eq!(o.cycles()[0].len(), 3);
    }

    #[test]
    fn commuting_permutations_give_marked_points() {
        // h = (1 2 3), v = (1 3 2) commute: a 3-square torus cover, three marked points
        let o = Origami::new(3, &[2, 3, 1], &[3, 1, 2]).unwrap();
        assert_eq!(o.cycles().len(), 3);
        assert!(o.cycles().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn rejects_bad_permutations() {
        assert!(matches!(
            Origami::new(2, &[1, 1], &[1, 2]),
            Err(Error::MalformedSpec(_))
        ));
        assert!(matches!(
            Origami::new(2, &[1, 2], &[1, 2]),
            Err(Error::DisconnectedSurface { components: 2 })
        ));
        assert!(matches!(Origami::new(1, &[2], &[1]), Err(Error::MalformedSpec(_))));
    }

    #[test]
    fn reverse_trace_is_consistent() {
        let o = l_origami();
        for &(p, q) in &[(1i64, 0i64), (0, 1), (-1, 0), (0, -1), (2, 3), (-3, 1), (5, -2), (-1, -4)] {
            for sheet in 0..3 {
                let fwd = o.trace(sheet, p, q);
                let back = o.trace(fwd.end_sheet, -p, -q);
                assert_eq!(back.end_sheet, sheet, "direction ({p},{q}) sheet {sheet}");
            }
        }
    }

    #[test]
    fn bottom_edge_return_is_permutation() {
        let o = l_origami();
        let perm = o.bottom_edge_return(-2, 3);
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..9).collect::<Vec<_>>());
    }
}
