//! Translation surfaces, the SL(2,R) action and the systole.

pub mod geom;
pub mod origami;
pub mod polygon;
pub mod spec;

use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::saddle;
pub use geom::{a_t, r_theta, GroupElement, PlanarVector};
use origami::Origami;
use polygon::PolygonComplex;
pub use spec::SurfaceSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Singularity {
    pub id: usize,
    /// Cone angle is `2π` times this.
    pub cone_angle_multiple: usize,
}

#[derive(Debug, Clone)]
pub enum Representation {
    SquareTiled(Arc<Origami>),
    Polygons(Arc<PolygonComplex>),
}

/// An immutable translation surface: a base combinatorial model plus an
/// SL(2,R) frame applied to every developed coordinate.
#[derive(Debug, Clone)]
pub struct TranslationSurface {
    repr: Representation,
    frame: GroupElement,
    singularities: Vec<Singularity>,
    area: f64,
    genus: usize,
    fingerprint: u64,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl TranslationSurface {
    pub fn from_spec(spec: &SurfaceSpec) -> Result<Self> {
        let fingerprint = fnv1a(spec.to_json().as_bytes());
        match spec {
            SurfaceSpec::SquareTiled { n, h, v } => {
                let o = Origami::new(*n, h, v)?;
                let singularities: Vec<_> = o
                    .cycles()
                    .iter()
                    .enumerate()
                    .map(|(id, c)| Singularity {
                        id,
                        cone_angle_multiple: c.len(),
                    })
                    .collect();
                let excess: usize = singularities.iter().map(|s| s.cone_angle_multiple - 1).sum();
                Ok(TranslationSurface {
                    repr: Representation::SquareTiled(Arc::new(o)),
                    frame: GroupElement::IDENTITY,
                    singularities,
                    area: *n as f64,
                    genus: excess / 2 + 1,
                    fingerprint,
                })
            }
            SurfaceSpec::Polygons { polygons, gluings } => {
                let polys = polygons
                    .iter()
                    .map(|p| p.iter().map(|&[x, y]| PlanarVector::new(x, y)).collect())
                    .collect();
                let c = PolygonComplex::new(polys, gluings.clone())?;
                let singularities = c
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(id, cl)| Singularity {
                        id,
                        cone_angle_multiple: cl.multiplicity,
                    })
                    .collect();
                Ok(TranslationSurface {
                    area: c.area,
                    genus: c.genus,
                    repr: Representation::Polygons(Arc::new(c)),
                    frame: GroupElement::IDENTITY,
                    singularities,
                    fingerprint,
                })
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&SurfaceSpec::from_json(text)?)
    }

    pub fn unit_torus() -> Self {
        Self::from_spec(&SurfaceSpec::unit_torus()).expect("unit torus is valid")
    }

    pub fn l_origami() -> Self {
        Self::from_spec(&SurfaceSpec::l_origami()).expect("L-origami is valid")
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn frame(&self) -> GroupElement {
        self.frame
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.singularities
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Hash of the spec document and the frame.
    pub fn fingerprint(&self) -> u64 {
        let mut bytes = self.fingerprint.to_le_bytes().to_vec();
        for e in self.frame.entries() {
            bytes.extend_from_slice(&e.to_le_bytes());
        }
        fnv1a(&bytes)
    }

    pub fn is_square_tiled(&self) -> bool {
        matches!(self.repr, Representation::SquareTiled(_))
    }

    /// The origami when the surface is square-tiled with an integer frame,
    /// so holonomies are still integer vectors.
    pub fn integral_origami(&self) -> Option<(&Origami, [i64; 4])> {
        match &self.repr {
            Representation::SquareTiled(o) => self.frame.integer_entries().map(|g| (o.as_ref(), g)),
            Representation::Polygons(_) => None,
        }
    }

    /// Base polygon complex (square-tiled surfaces are converted on demand).
    pub fn polygon_complex(&self) -> Arc<PolygonComplex> {
        match &self.repr {
            Representation::SquareTiled(o) => o.polygon_complex(),
            Representation::Polygons(c) => Arc::clone(c),
        }
    }

    /// Polygon vertices after the frame is applied.
    pub fn polygon_vertices(&self) -> Vec<Vec<PlanarVector>> {
        self.polygon_complex()
            .polygons
            .iter()
            .map(|p| p.iter().map(|&v| self.frame.apply(v)).collect())
            .collect()
    }

    /// Lattice basis when the surface is a flat torus with a single marked
    /// point, in which case saddle connections are the primitive vectors.
    pub fn torus_lattice(&self) -> Option<(PlanarVector, PlanarVector)> {
        if self.genus != 1 || self.singularities.len() != 1 {
            return None;
        }
        let (b1, b2) = match &self.repr {
            Representation::SquareTiled(o) if o.n() == 1 => {
                (PlanarVector::new(1.0, 0.0), PlanarVector::new(0.0, 1.0))
            }
            Representation::Polygons(c) if c.polygons.len() == 1 && c.polygons[0].len() == 4 => {
                let poly = &c.polygons[0];
                let opposite = c.gluings.iter().all(|g| {
                    let (a, b) = (g[0][1], g[1][1]);
                    (a + 2) % 4 == b
                });
                if !opposite {
                    return None;
                }
                (poly[1] - poly[0], poly[3] - poly[0])
            }
            _ => return None,
        };
        Some((self.frame.apply(b1), self.frame.apply(b2)))
    }

    /// `g · self`.
    pub fn apply_group(&self, g: &GroupElement) -> TranslationSurface {
        let mut out = self.clone();
        out.frame = g.compose(&self.frame);
        out
    }

    /// Length of a shortest saddle connection. Enumerates within
    /// `hint_radius`, doubling until something is found.
    pub fn systole(&self, hint_radius: f64) -> f64 {
        if let Some((b1, b2)) = self.torus_lattice() {
            return saddle::lattice::shortest_vector(b1, b2);
        }
        let mut r = if hint_radius > 0.0 && hint_radius.is_finite() {
            hint_radius
        } else {
            1.0
        };
        loop {
            if let Ok(set) = saddle::enumerate(self, r) {
                if let Some(m) = set.elements().iter().map(|e| e.holonomy.norm()).reduce(f64::min) {
                    return m;
                }
            }
            r *= 2.0;
        }
    }
}

/// Builds a surface from a parsed spec document.
pub fn build_surface(spec: &SurfaceSpec) -> Result<TranslationSurface> {
    TranslationSurface::from_spec(spec)
}

/// `g · s`.
pub fn apply_group(g: &GroupElement, s: &TranslationSurface) -> TranslationSurface {
    s.apply_group(g)
}

/// Shortest saddle connection length.
pub fn systole(s: &TranslationSurface, hint_radius: f64) -> f64 {
    s.systole(hint_radius)
}
