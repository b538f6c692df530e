use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The on-disk surface description. See `docs/surface-spec.md`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    SquareTiled {
        n: usize,
        /// Right-neighbour permutation, 1-indexed one-line notation.
        h: Vec<usize>,
        /// Top-neighbour permutation, 1-indexed one-line notation.
        v: Vec<usize>,
    },
    Polygons {
        polygons: Vec<Vec<[f64; 2]>>,
        /// Pairs `[[p, e], [p', e']]`: edge `e` of polygon `p` (from vertex
        /// `e` to `e+1`) is glued to edge `e'` of polygon `p'`.
        gluings: Vec<[[usize; 2]; 2]>,
    },
}

impl SurfaceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedSpec(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        SurfaceSpec::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("surface spec serializes")
    }

    /// The unit square torus.
    pub fn unit_torus() -> Self {
        SurfaceSpec::SquareTiled {
            n: 1,
            h: vec![1],
            v: vec![1],
        }
    }

    /// The three-square L-shaped origami: squares 1 and 2 side by side,
    /// square 3 on top of square 1. One cone point of angle 6π, genus 2.
    pub fn l_origami() -> Self {
        SurfaceSpec::SquareTiled {
            n: 3,
            h: vec![2, 1, 3],
            v: vec![3, 2, 1],
        }
    }
}
