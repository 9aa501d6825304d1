//! JSON patch fixtures.
//!
//! A fixture gives the free vertex `center` and either an ordered
//! counterclockwise `boundary` ring or an explicit `stencils` list. For
//! triangles the ring is the star polygon. For quads the ring has even
//! length and quad `i` is `(center, b[2i], b[2i+1], b[2i+2])`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::criteria::{ElementKind, ElementStencil};
use crate::geometry::Point;
use crate::mesh::Patch;

use super::IoError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedOptimum {
    pub criterion: String,
    pub point: Point,
    pub objective: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchFixture {
    pub dimension: usize,
    pub element_kind: ElementKind,
    pub center: Point,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<Point>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stencils: Vec<ElementStencil>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedOptimum>,
}

impl PatchFixture {
    pub fn parse(name: &str, text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Parse { file: name.into(), line: e.line(), message: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|e| IoError::Io { path: path.display().to_string(), source: e })?;
        PatchFixture::parse(&path.display().to_string(), &text)
    }

    pub fn to_patch(&self) -> Result<Patch, IoError> {
        let bad = |m: String| IoError::Fixture(m);
        if self.dimension != self.element_kind.dim() {
            return Err(bad(format!("{} elements need dimension {}, got {}", self.element_kind, self.element_kind.dim(), self.dimension)));
        }
        if self.center.dim() != self.dimension {
            return Err(bad("center has the wrong dimension".into()));
        }
        let stencils = match (self.boundary.is_empty(), self.stencils.is_empty()) {
            (false, true) => self.ring_stencils()?,
            (true, false) => {
                if let Some(s) = self.stencils.iter().find(|s| s.kind != self.element_kind) {
                    return Err(bad(format!("stencil of kind {} in a {} fixture", s.kind, self.element_kind)));
                }
                self.stencils.clone()
            }
            _ => return Err(bad("give exactly one of `boundary` and `stencils`".into())),
        };
        let patch = Patch::from_stencils(self.center, stencils)?;
        if !patch.domain.contains(&self.center, 1e-12 * (1.0 + self.center.max_abs())) {
            return Err(bad("center lies outside the patch kernel".into()));
        }
        Ok(patch)
    }

    fn ring_stencils(&self) -> Result<Vec<ElementStencil>, IoError> {
        let b = &self.boundary;
        let n = b.len();
        let out: Result<Vec<_>, _> = match self.element_kind {
            ElementKind::Triangle => (0..n).map(|i| ElementStencil::triangle(b[i], b[(i + 1) % n])).collect(),
            ElementKind::Quad => {
                if n < 4 || n % 2 != 0 {
                    return Err(IoError::Fixture(format!("quad boundary needs an even length of at least 4, got {n}")));
                }
                (0..n / 2).map(|i| ElementStencil::quad(b[2 * i], b[2 * i + 1], b[(2 * i + 2) % n])).collect()
            }
            ElementKind::Tetrahedron => {
                return Err(IoError::Fixture("tetrahedral fixtures list their stencils".into()))
            }
        };
        Ok(out.map_err(crate::mesh::MeshError::from)?)
    }
}
