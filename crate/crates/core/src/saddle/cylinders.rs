//! Maximal cylinders of square-tiled surfaces.
//!
//! In a rational direction every corner is singular, so each cycle of the
//! bottom-edge return map on the `n·q` subintervals sweeps out exactly one
//! maximal cylinder; its boundary leaves pass through corners.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::saddle::exact::primitive_half_rows;
use crate::saddle::{check_radius, HolonomySet, SaddleConnection, SetKind};
use crate::surface::origami::cycle_lengths;
use crate::surface::{PlanarVector, TranslationSurface};

/// Waist holonomies `±w` of all maximal cylinders with `|w| <= t`. The
/// `separatrix` field of each element numbers the cylinder within its
/// direction; `start` and `end` are 0.
pub fn cylinders(s: &TranslationSurface, t: f64) -> Result<HolonomySet> {
    check_radius(t)?;
    let (o, [a, b, c, d]) = s.integral_origami().ok_or_else(|| {
        Error::InvalidArgument("cylinder decomposition needs a square-tiled surface with integer frame".into())
    })?;
    let rows = primitive_half_rows(t);
    let elements: Vec<SaddleConnection> = rows
        .par_iter()
        .flat_map_iter(|row| {
            let mut out = Vec::new();
            for &(p, q) in row {
                let (mut bp, mut bq) = (d * p - b * q, -c * p + a * q);
                // the base direction's orientation may flip; the line is the same
                let mut sign = 1.0;
                if bq < 0 || (bq == 0 && bp < 0) {
                    bp = -bp;
                    bq = -bq;
                    sign = -1.0;
                }
                let (lengths, denom) = if bq == 0 {
                    (o.horizontal_cycle_lengths(), 1)
                } else {
                    (cycle_lengths(&o.bottom_edge_return(bp, bq)), bq as usize)
                };
                let w = PlanarVector::new(p as f64, q as f64) * sign;
                for (idx, len) in lengths.into_iter().enumerate() {
                    let k = (len / denom) as f64;
                    let waist = w * k;
                    if waist.norm() <= t {
                        for v in [waist, -waist] {
                            out.push(SaddleConnection {
                                holonomy: v,
                                start: 0,
                                end: 0,
                                separatrix: idx,
                            });
                        }
                    }
                }
            }
            out
        })
        .collect();
    Ok(HolonomySet::new(elements, t, s, SetKind::Cylinders))
}
