//! Meshes of triangles, convex quadrilaterals or tetrahedra, and the
//! per-vertex smoothing drivers built on top of the placement solvers.

mod patch;
mod report;
mod smooth;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::criteria::{CriterionError, ElementKind};
use crate::geometry::{orient2, orient3, Point};
use crate::qcp::SolveError;
use crate::special::SpecialError;

pub use patch::{extract_patch, Patch};
pub use report::{quality_report, worst_quality, CriterionQuality, Histogram, QualityReport};
pub use smooth::{
    laplacian_smooth, optimal_placement, smooth_vertex, sweep, sweep_observed, LaplacianConfig, PassStats,
    Placement, PlacementMethod, SkippedVertex, SmoothConfig, SmoothOutcome, SweepStats, WorstQuality,
};

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("vertex {0} does not exist")]
    VertexOutOfRange(usize),
    #[error("vertex {vertex} cannot be smoothed: {reason}")]
    NotSmoothable { vertex: usize, reason: String },
    #[error("the star of vertex {0} is not a closed, consistently oriented ring")]
    OpenStar(usize),
    #[error("invalid mesh: {0}")]
    Invalid(ValidationReport),
    #[error("malformed mesh: {0}")]
    Malformed(String),
    #[error("criteria `{0}` mix quasiconvex and non-quasiconvex kinds; smooth them separately")]
    MixedConvexity(String),
    #[error("criteria `{criteria}` apply to none of the {element} elements")]
    NoApplicableCriteria { criteria: String, element: String },
    #[error(transparent)]
    Criterion(#[from] CriterionError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

impl MeshError {
    /// Whether the error stems from how the operation was requested rather
    /// than from the mesh data.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            MeshError::MixedConvexity(_)
                | MeshError::NoApplicableCriteria { .. }
                | MeshError::Criterion(_)
                | MeshError::Solve(SolveError::NotQuasiconvex { .. })
                | MeshError::Special(SpecialError::BadTolerance(_))
                | MeshError::Special(SpecialError::Unsupported(_))
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Element {
    pub kind: ElementKind,
    pub nodes: Vec<usize>,
}

impl Element {
    pub fn triangle(a: usize, b: usize, c: usize) -> Self {
        Element { kind: ElementKind::Triangle, nodes: vec![a, b, c] }
    }

    pub fn quad(a: usize, b: usize, c: usize, d: usize) -> Self {
        Element { kind: ElementKind::Quad, nodes: vec![a, b, c, d] }
    }

    pub fn tet(a: usize, b: usize, c: usize, d: usize) -> Self {
        Element { kind: ElementKind::Tetrahedron, nodes: vec![a, b, c, d] }
    }

    /// Node list reordered to start at `v` with the same orientation.
    pub fn rotated_to(&self, v: usize) -> Option<Vec<usize>> {
        let i = self.nodes.iter().position(|&n| n == v)?;
        let n = &self.nodes;
        Some(match self.kind {
            ElementKind::Triangle | ElementKind::Quad => {
                let k = n.len();
                (0..k).map(|j| n[(i + j) % k]).collect()
            }
            // Even permutations bringing node i to the front.
            ElementKind::Tetrahedron => match i {
                0 => vec![n[0], n[1], n[2], n[3]],
                1 => vec![n[1], n[0], n[3], n[2]],
                2 => vec![n[2], n[3], n[0], n[1]],
                _ => vec![n[3], n[2], n[1], n[0]],
            },
        })
    }
}

/// Vertices, fixed flags and elements. Triangles and quads are
/// counterclockwise, tetrahedra have positive orientation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mesh {
    pub dim: usize,
    pub vertices: Vec<Point>,
    pub fixed: Vec<bool>,
    pub elements: Vec<Element>,
}

impl Mesh {
    /// Build a mesh, checking dimensions, arities and index ranges.
    /// Orientation is not checked here; see [`validate`].
    pub fn new(dim: usize, vertices: Vec<Point>, fixed: Vec<bool>, elements: Vec<Element>) -> Result<Self, MeshError> {
        if dim != 2 && dim != 3 {
            return Err(MeshError::Malformed(format!("dimension must be 2 or 3, got {dim}")));
        }
        if fixed.len() != vertices.len() {
            return Err(MeshError::Malformed(format!(
                "{} fixed flags for {} vertices",
                fixed.len(),
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| p.dim() != dim || !p.is_finite()) {
            return Err(MeshError::Malformed(format!("vertex {i} is not a finite {dim}D point")));
        }
        for (e, el) in elements.iter().enumerate() {
            if el.kind.dim() != dim || el.nodes.len() != el.kind.num_nodes() {
                return Err(MeshError::Malformed(format!("element {e} is not a valid {dim}D element")));
            }
            if let Some(&i) = el.nodes.iter().find(|&&i| i >= vertices.len()) {
                return Err(MeshError::Malformed(format!("element {e} references missing vertex {i}")));
            }
        }
        Ok(Mesh { dim, vertices, fixed, elements })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Element indices incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (e, el) in self.elements.iter().enumerate() {
            for &n in &el.nodes {
                if n < inc.len() && !inc[n].contains(&e) {
                    inc[n].push(e);
                }
            }
        }
        inc
    }

    /// Vertices joined to `v` by an element edge, sorted. Quad diagonals are
    /// not edges.
    pub fn edge_neighbors(&self, v: usize, incident: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for &e in incident {
            let el = &self.elements[e];
            let Some(r) = el.rotated_to(v) else { continue };
            match el.kind {
                ElementKind::Quad => out.extend([r[1], r[3]]),
                _ => out.extend(&r[1..]),
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn element_points(&self, e: usize) -> Vec<Point> {
        self.elements[e].nodes.iter().map(|&i| self.vertices[i]).collect()
    }

    /// Whether the star of `v` is a closed ring (2D) or closed surface (3D).
    pub fn star_is_closed(&self, v: usize, incident: &[usize]) -> bool {
        if incident.is_empty() {
            return false;
        }
        let mut links: HashMap<(usize, usize), usize> = HashMap::new();
        for &e in incident {
            let el = &self.elements[e];
            let Some(r) = el.rotated_to(v) else { return false };
            let edges: Vec<(usize, usize)> = match el.kind {
                ElementKind::Triangle => vec![(r[1], r[2])],
                ElementKind::Quad => vec![(r[1], r[3])],
                ElementKind::Tetrahedron => vec![(r[1], r[2]), (r[2], r[3]), (r[3], r[1])],
            };
            for ed in edges {
                *links.entry(ed).or_default() += 1;
            }
        }
        if self.dim == 2 {
            // Every link vertex starts exactly one edge and ends exactly one,
            // and the edges form a single cycle.
            let mut next: HashMap<usize, usize> = HashMap::new();
            let mut ends: HashMap<usize, usize> = HashMap::new();
            for (&(a, b), &c) in &links {
                if c != 1 || next.insert(a, b).is_some() {
                    return false;
                }
                *ends.entry(b).or_default() += 1;
            }
            if ends.len() != next.len() || ends.values().any(|&c| c != 1) || !next.keys().all(|k| ends.contains_key(k)) {
                return false;
            }
            let start = *next.keys().min().expect("nonempty");
            let (mut cur, mut steps) = (start, 0);
            loop {
                cur = next[&cur];
                steps += 1;
                if cur == start || steps > next.len() {
                    break;
                }
            }
            cur == start && steps == next.len()
        } else {
            links.iter().all(|(&(a, b), &c)| c == 1 && links.get(&(b, a)) == Some(&1))
        }
    }

    /// Mark every vertex whose star is open as fixed; returns how many changed.
    pub fn fix_open_stars(&mut self) -> usize {
        let inc = self.incidence();
        let mut changed = 0;
        for v in 0..self.vertices.len() {
            if !self.fixed[v] && !self.star_is_closed(v, &inc[v]) {
                self.fixed[v] = true;
                changed += 1;
            }
        }
        changed
    }

    pub fn movable(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| !self.fixed[v])
    }
}

/// Why an element with the given corner positions is unusable, if it is.
pub fn element_defect(kind: ElementKind, p: &[Point]) -> Option<ViolationKind> {
    let lmax = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .map(|(i, j)| p[i].distance(&p[j]))
        .fold(0.0, f64::max);
    match kind {
        ElementKind::Triangle => {
            (orient2(&p[0], &p[1], &p[2]) <= 1e-14 * lmax * lmax).then_some(ViolationKind::Inverted)
        }
        ElementKind::Quad => {
            let area = orient2(&p[0], &p[1], &p[2]) + orient2(&p[0], &p[2], &p[3]);
            if area <= 1e-14 * lmax * lmax {
                return Some(ViolationKind::Inverted);
            }
            let convex = (0..4).all(|i| {
                (p[(i + 1) % 4] - p[i]).cross2(&(p[(i + 2) % 4] - p[(i + 1) % 4])) > 1e-14 * lmax * lmax
            });
            (!convex).then_some(ViolationKind::NonconvexQuad)
        }
        ElementKind::Tetrahedron => {
            (orient3(&p[0], &p[1], &p[2], &p[3]) <= 1e-14 * lmax.powi(3)).then_some(ViolationKind::Inverted)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    IndexOutOfRange,
    DuplicateNode,
    Inverted,
    NonconvexQuad,
    OpenStar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.element, self.vertex) {
            (Some(e), _) => write!(f, "element {e}: {:?}", self.kind),
            (_, Some(v)) => write!(f, "vertex {v}: {:?}", self.kind),
            _ => write!(f, "{:?}", self.kind),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "no violations");
        }
        let shown: Vec<String> = self.violations.iter().take(5).map(|v| v.to_string()).collect();
        write!(f, "{} violation(s): {}", self.violations.len(), shown.join("; "))?;
        if self.violations.len() > 5 {
            write!(f, "; ...")?;
        }
        Ok(())
    }
}

/// Check index bounds, repeated nodes, orientation, quad convexity and that
/// every movable vertex has a closed star.
pub fn validate(mesh: &Mesh) -> ValidationReport {
    let mut violations = Vec::new();
    let n = mesh.vertices.len();
    for (e, el) in mesh.elements.iter().enumerate() {
        let bad = |kind| Violation { kind, element: Some(e), vertex: None };
        if el.nodes.iter().any(|&i| i >= n) {
            violations.push(bad(ViolationKind::IndexOutOfRange));
            continue;
        }
        let mut sorted = el.nodes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != el.nodes.len() {
            violations.push(bad(ViolationKind::DuplicateNode));
            continue;
        }
        if let Some(k) = element_defect(el.kind, &mesh.element_points(e)) {
            violations.push(bad(k));
        }
    }
    if violations.iter().any(|v| v.kind == ViolationKind::IndexOutOfRange) {
        return ValidationReport { violations };
    }
    let inc = mesh.incidence();
    for v in mesh.movable() {
        if !mesh.star_is_closed(v, &inc[v]) {
            violations.push(Violation { kind: ViolationKind::OpenStar, element: None, vertex: Some(v) });
        }
    }
    ValidationReport { violations }
}
