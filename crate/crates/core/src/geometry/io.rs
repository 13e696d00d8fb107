//! The JSON polytope file format.
//!
//! ```json
//! { "dim": 2,
//!   "vertices": [[0, 0], [1, 0], [0, 1]],
//!   "halfspaces": [{ "normal": [0, -1], "offset": 0 }] }
//! ```
//!
//! `halfspaces` may be omitted only for a simplex (`dim + 1` vertices).
//! The face lattice is never read from a file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ConvexPolytope, HalfSpace, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfSpaceRecord>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfSpaceRecord {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl PolytopeFile {
    pub fn from_polytope(p: &ConvexPolytope) -> Self {
        PolytopeFile {
            dim: p.dim(),
            vertices: p.vertices().iter().map(|v| v.coords().to_vec()).collect(),
            halfspaces: Some(
                p.halfspaces()
                    .iter()
                    .map(|h| HalfSpaceRecord {
                        normal: h.normal().coords().to_vec(),
                        offset: h.offset(),
                    })
                    .collect(),
            ),
        }
    }

    pub fn build(self, tolerance: f64) -> Result<ConvexPolytope> {
        let n = self.dim;
        if self.vertices.is_empty() {
            return Err(Error::Parse("\"vertices\" must not be empty".into()));
        }
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, c) in self.vertices.into_iter().enumerate() {
            if c.len() != n {
                return Err(Error::Parse(format!(
                    "vertex {i} has {} coordinates, \"dim\" is {n}",
                    c.len()
                )));
            }
            vertices.push(Vector::new(c));
        }
        match self.halfspaces {
            Some(records) => {
                let mut halfspaces = Vec::with_capacity(records.len());
                for (j, r) in records.into_iter().enumerate() {
                    if r.normal.len() != n {
                        return Err(Error::Parse(format!(
                            "half-space {j} normal has {} coordinates, \"dim\" is {n}",
                            r.normal.len()
                        )));
                    }
                    halfspaces.push(HalfSpace::new(Vector::new(r.normal), r.offset)?);
                }
                ConvexPolytope::with_tolerance(vertices, halfspaces, tolerance)
            }
            None if vertices.len() == n + 1 => {
                ConvexPolytope::simplex_with_tolerance(vertices, tolerance)
            }
            None => Err(Error::Parse(format!(
                "\"halfspaces\" is required unless the file lists dim + 1 = {} vertices \
                 (got {}); hull computation is not supported",
                n + 1,
                vertices.len()
            ))),
        }
    }
}

pub fn parse_polytope(text: &str, tolerance: f64) -> Result<ConvexPolytope> {
    let file: PolytopeFile = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    file.build(tolerance)
}

pub fn serialize_polytope(p: &ConvexPolytope) -> String {
    serde_json::to_string_pretty(&PolytopeFile::from_polytope(p))
        .expect("polytope file serialization is infallible")
}

pub fn load_polytope(path: &Path, tolerance: f64) -> Result<ConvexPolytope> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_polytope(&text, tolerance).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}
