//! Saddle connection and cylinder enumeration.

pub mod cylinders;
pub mod exact;
pub mod generic;
pub mod lattice;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{PlanarVector, TranslationSurface};

pub use cylinders::cylinders;
pub use exact::enumerate_exact;
pub use generic::enumerate_generic;
pub use lattice::enumerate_lattice;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleConnection {
    pub holonomy: PlanarVector,
    pub start: usize,
    pub end: usize,
    /// Outgoing separatrix at `start`, in `0..m_start`.
    pub separatrix: usize,
}

impl SaddleConnection {
    fn sort_cmp(&self, other: &Self) -> Ordering {
        self.holonomy
            .norm()
            .total_cmp(&other.holonomy.norm())
            .then(self.holonomy.angle().total_cmp(&other.holonomy.angle()))
            .then(self.start.cmp(&other.start))
            .then(self.end.cmp(&other.end))
            .then(self.separatrix.cmp(&other.separatrix))
            .then(self.holonomy.x.total_cmp(&other.holonomy.x))
            .then(self.holonomy.y.total_cmp(&other.holonomy.y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    SaddleConnections,
    Cylinders,
}

/// A multiset of holonomies of norm at most `radius`, sorted by
/// (norm, angle, start, end, separatrix).
#[derive(Debug, Clone)]
pub struct HolonomySet {
    elements: Vec<SaddleConnection>,
    radius: f64,
    fingerprint: u64,
    singularity_count: usize,
    kind: SetKind,
    surface: Option<TranslationSurface>,
}

impl HolonomySet {
    pub(crate) fn new(
        mut elements: Vec<SaddleConnection>,
        radius: f64,
        surface: &TranslationSurface,
        kind: SetKind,
    ) -> Self {
        elements.sort_by(|a, b| a.sort_cmp(b));
        HolonomySet {
            elements,
            radius,
            fingerprint: surface.fingerprint(),
            singularity_count: surface.singularities().len(),
            kind,
            surface: Some(surface.clone()),
        }
    }

    /// A set built from raw holonomies (single singularity, no surface).
    pub fn from_vectors(vectors: Vec<PlanarVector>, radius: f64) -> Self {
        let mut elements: Vec<_> = vectors
            .into_iter()
            .filter(|v| v.norm() <= radius)
            .map(|holonomy| SaddleConnection {
                holonomy,
                start: 0,
                end: 0,
                separatrix: 0,
            })
            .collect();
        elements.sort_by(|a, b| a.sort_cmp(b));
        HolonomySet {
            elements,
            radius,
            fingerprint: 0,
            singularity_count: 1,
            kind: SetKind::SaddleConnections,
            surface: None,
        }
    }

    pub fn elements(&self) -> &[SaddleConnection] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn singularity_count(&self) -> usize {
        self.singularity_count
    }

    pub fn holonomies(&self) -> impl Iterator<Item = PlanarVector> + '_ {
        self.elements.iter().map(|e| e.holonomy)
    }

    /// Elements of norm at most `t`; a prefix since the set is norm-sorted.
    pub fn within(&self, t: f64) -> &[SaddleConnection] {
        let k = self.elements.partition_point(|e| e.holonomy.norm() <= t);
        &self.elements[..k]
    }

    /// Number of elements sharing each holonomy, in element order.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut counts: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        let key = |v: PlanarVector| ((v.x + 0.0).to_bits(), (v.y + 0.0).to_bits());
        for e in &self.elements {
            *counts.entry(key(e.holonomy)).or_default() += 1;
        }
        self.elements.iter().map(|e| counts[&key(e.holonomy)]).collect()
    }

    fn with_elements(&self, elements: Vec<SaddleConnection>, kind: SetKind) -> Self {
        HolonomySet {
            elements,
            radius: self.radius,
            fingerprint: self.fingerprint,
            singularity_count: self.singularity_count,
            kind,
            surface: self.surface.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    All,
    Loop(usize),
    Pair(usize, usize),
    Cylinders,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfigurationFilter {
    pub kind: FilterKind,
    pub with_multiplicity: bool,
}

impl ConfigurationFilter {
    pub fn all() -> Self {
        ConfigurationFilter {
            kind: FilterKind::All,
            with_multiplicity: true,
        }
    }

    pub fn new(kind: FilterKind) -> Self {
        ConfigurationFilter {
            kind,
            with_multiplicity: true,
        }
    }

    pub fn without_multiplicity(mut self) -> Self {
        self.with_multiplicity = false;
        self
    }
}

impl Default for ConfigurationFilter {
    fn default() -> Self {
        ConfigurationFilter::all()
    }
}

/// Enumerates saddle connections with the best available engine: exact
/// tracing for square-tiled surfaces with integer frames, the lattice
/// shortcut for one-point tori, development otherwise.
pub fn enumerate(s: &TranslationSurface, t: f64) -> Result<HolonomySet> {
    if s.integral_origami().is_some() {
        enumerate_exact(s, t)
    } else if s.torus_lattice().is_some() {
        enumerate_lattice(s, t)
    } else {
        enumerate_generic(s, t)
    }
}

fn check_radius(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// Restricts a holonomy set to a configuration.
pub fn filter_configuration(h: &HolonomySet, c: &ConfigurationFilter) -> Result<HolonomySet> {
    let n = h.singularity_count;
    let check = |id: usize| if id < n { Ok(()) } else { Err(Error::UnknownSingularity(id)) };
    let mut out = match c.kind {
        FilterKind::All => h.clone(),
        FilterKind::Loop(i) => {
            check(i)?;
            h.with_elements(
                h.elements.iter().filter(|e| e.start == i && e.end == i).copied().collect(),
                h.kind,
            )
        }
        FilterKind::Pair(i, j) => {
            check(i)?;
            check(j)?;
            if i == j {
                return Err(Error::InvalidArgument("Pair needs two distinct singularities; use Loop".into()));
            }
            h.with_elements(
                h.elements
                    .iter()
                    .filter(|e| (e.start == i && e.end == j) || (e.start == j && e.end == i))
                    .copied()
                    .collect(),
                h.kind,
            )
        }
        FilterKind::Cylinders => match h.kind {
            SetKind::Cylinders => h.clone(),
            SetKind::SaddleConnections => {
                let s = h.surface.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("cylinder filter needs a set built from a surface".into())
                })?;
                cylinders(s, h.radius)?
            }
        },
    };
    if !c.with_multiplicity {
        let mut seen = std::collections::HashSet::new();
        out.elements
            .retain(|e| seen.insert(((e.holonomy.x + 0.0).to_bits(), (e.holonomy.y + 0.0).to_bits())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_filters() {
        let s = TranslationSurface::unit_torus();
        let h = enumerate(&s, 2.0).unwrap();
        assert_eq!(h.len(), 8);
        let l = filter_configuration(&h, &ConfigurationFilter::new(FilterKind::Loop(0))).unwrap();
        assert_eq!(l.len(), 8);
        assert!(matches!(
            filter_configuration(&h, &ConfigurationFilter::new(FilterKind::Pair(0, 1))),
            Err(Error::UnknownSingularity(1))
        ));
    }

    #[test]
    fn collapse_reduces_l_origami() {
        let s = TranslationSurface::l_origami();
        let h = enumerate(&s, 10.0).unwrap();
        let c = filter_configuration(&h, &ConfigurationFilter::all().without_multiplicity()).unwrap();
        assert!(c.len() <= h.len());
        assert!(c.len() < h.len());
    }
}
