use crate::criteria::{quad_domain_constraints, CostTerm, Criterion, ElementKind, ElementStencil};
use crate::geometry::{bbox, ConvexRegion, Halfspace, Point};
use crate::qcp::QuasiconvexProgram;

use super::{Mesh, MeshError};

/// A free vertex together with the fixed vertices of its incident elements
/// and the convex region where it may move.
#[derive(Clone, Debug, PartialEq)]
pub struct Patch {
    /// Mesh index of the free vertex, if the patch came from a mesh.
    pub vertex: Option<usize>,
    /// Current position of the free vertex.
    pub position: Point,
    pub stencils: Vec<ElementStencil>,
    /// Mesh indices of the elements behind each stencil.
    pub elements: Vec<usize>,
    /// Kernel halfspaces, quad diagonal halfplanes and a bounding box.
    pub domain: ConvexRegion,
}

impl Patch {
    /// Triangles joining `position` to each edge of a counterclockwise polygon.
    pub fn from_star_polygon(position: Point, polygon: &[Point]) -> Result<Self, MeshError> {
        let n = polygon.len();
        if n < 3 {
            return Err(MeshError::Malformed(format!("star polygon needs 3 vertices, got {n}")));
        }
        let stencils = (0..n)
            .map(|i| ElementStencil::triangle(polygon[i], polygon[(i + 1) % n]))
            .collect::<Result<Vec<_>, _>>()?;
        Patch::from_stencils(position, stencils)
    }

    pub fn from_stencils(position: Point, stencils: Vec<ElementStencil>) -> Result<Self, MeshError> {
        let Some(first) = stencils.first() else {
            return Err(MeshError::Malformed("patch has no elements".into()));
        };
        let dim = first.dim();
        if position.dim() != dim || stencils.iter().any(|s| s.dim() != dim) {
            return Err(MeshError::Malformed("patch mixes dimensions".into()));
        }
        let mut domain = ConvexRegion::new(dim);
        for s in &stencils {
            match s.kind {
                ElementKind::Triangle => domain.push(Halfspace::left_of(&s.fixed[0], &s.fixed[1])),
                ElementKind::Quad => {
                    for h in quad_domain_constraints(s)? {
                        domain.push(h);
                    }
                }
                ElementKind::Tetrahedron => {
                    let [v1, v2, v3] = [s.fixed[0], s.fixed[1], s.fixed[2]];
                    domain.push(Halfspace::through(&v1, (v2 - v1).cross(&(v3 - v1))));
                }
            }
        }
        let pts: Vec<Point> = stencils.iter().flat_map(|s| s.fixed.iter().copied()).collect();
        let (lo, hi) = bbox(&pts).expect("stencils have vertices");
        let c = lo.midpoint(&hi);
        let half = (0..dim).map(|k| 0.5 * (hi[k] - lo[k])).fold(0.0, f64::max).max(1e-300);
        let mut blo = c;
        let mut bhi = c;
        for k in 0..dim {
            blo = blo.with_coord(k, c[k] - 10.0 * half);
            bhi = bhi.with_coord(k, c[k] + 10.0 * half);
        }
        domain.push_box(&blo, &bhi);
        let elements = (0..stencils.len()).collect();
        Ok(Patch { vertex: None, position, stencils, elements, domain })
    }

    pub fn dim(&self) -> usize {
        self.domain.dim
    }

    /// Cost terms for every compatible (criterion, element) pair. Each
    /// criterion must apply to at least one element.
    pub fn terms(&self, criteria: &[Criterion]) -> Result<Vec<CostTerm>, MeshError> {
        let mut terms = Vec::new();
        for c in criteria {
            let before = terms.len();
            for s in &self.stencils {
                if c.kind.applies_to(s.kind) {
                    terms.push(CostTerm::new(*c, s.clone())?);
                }
            }
            if terms.len() == before {
                return Err(MeshError::NoApplicableCriteria {
                    criteria: c.to_string(),
                    element: self.stencils[0].kind.to_string(),
                });
            }
        }
        if terms.is_empty() {
            return Err(MeshError::NoApplicableCriteria { criteria: String::new(), element: String::new() });
        }
        Ok(terms)
    }

    pub fn program(&self, criteria: &[Criterion]) -> Result<QuasiconvexProgram, MeshError> {
        Ok(QuasiconvexProgram::new(self.domain.clone(), self.terms(criteria)?)?)
    }

    /// Fixed vertices joined to the free vertex by an edge, without repeats.
    pub fn neighbors(&self) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for s in &self.stencils {
            for p in s.edge_neighbors() {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }
}

/// The patch around movable interior vertex `v`.
pub fn extract_patch(mesh: &Mesh, v: usize) -> Result<Patch, MeshError> {
    if v >= mesh.vertices.len() {
        return Err(MeshError::VertexOutOfRange(v));
    }
    if mesh.fixed[v] {
        return Err(MeshError::NotSmoothable { vertex: v, reason: "vertex is fixed".into() });
    }
    let inc = mesh.incidence();
    patch_with_incidence(mesh, v, &inc[v])
}

pub(super) fn patch_with_incidence(mesh: &Mesh, v: usize, incident: &[usize]) -> Result<Patch, MeshError> {
    if incident.is_empty() {
        return Err(MeshError::NotSmoothable { vertex: v, reason: "vertex has no elements".into() });
    }
    if !mesh.star_is_closed(v, incident) {
        return Err(MeshError::OpenStar(v));
    }
    let mut stencils = Vec::with_capacity(incident.len());
    for &e in incident {
        let el = &mesh.elements[e];
        let r = el.rotated_to(v).expect("incident element contains v");
        let fixed = r[1..].iter().map(|&i| mesh.vertices[i]).collect();
        stencils.push(ElementStencil::new(el.kind, fixed)?);
    }
    let mut p = Patch::from_stencils(mesh.vertices[v], stencils)?;
    p.vertex = Some(v);
    p.elements = incident.to_vec();
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{halfspace_intersection, Polytope};
    use crate::mesh::{Element, Mesh};

    fn hex_mesh() -> Mesh {
        let mut v = vec![Point::new2(0.0, 0.0)];
        for k in 0..6 {
            let a = k as f64 * std::f64::consts::PI / 3.0;
            v.push(Point::new2(a.cos(), a.sin()));
        }
        let e = (0..6).map(|k| Element::triangle(0, 1 + k, 1 + (k + 1) % 6)).collect();
        let mut fixed = vec![true; 7];
        fixed[0] = false;
        Mesh::new(2, v, fixed, e).unwrap()
    }

    #[test]
    fn hexagon_patch() {
        let m = hex_mesh();
        let p = extract_patch(&m, 0).unwrap();
        assert_eq!(p.stencils.len(), 6);
        assert!(p.stencils.iter().all(|s| s.fixed.len() == 2));
        match halfspace_intersection(&p.domain) {
            Polytope::Bounded { vertices } => assert_eq!(vertices.len(), 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(extract_patch(&m, 1), Err(MeshError::NotSmoothable { .. })));
    }

    #[test]
    fn quad_patch_has_diagonal_constraints() {
        // 3x3 vertex grid of unit quads, centre vertex 4.
        let v: Vec<Point> = (0..9).map(|i| Point::new2((i % 3) as f64, (i / 3) as f64)).collect();
        let e = vec![
            Element::quad(0, 1, 4, 3),
            Element::quad(1, 2, 5, 4),
            Element::quad(3, 4, 7, 6),
            Element::quad(4, 5, 8, 7),
        ];
        let mut fixed = vec![true; 9];
        fixed[4] = false;
        let m = Mesh::new(2, v, fixed, e).unwrap();
        let p = extract_patch(&m, 4).unwrap();
        assert_eq!(p.stencils.len(), 4);
        assert!(p.stencils.iter().all(|s| s.fixed.len() == 3));
        // three constraints per quad plus the four box sides
        assert_eq!(p.domain.len(), 4 * 3 + 4);
        assert!(p.domain.contains(&Point::new2(1.0, 1.0), 0.0));
        // Beyond the diagonal (1,0)-(2,1) of the lower right quad.
        assert!(!p.domain.contains(&Point::new2(1.9, 0.5), 0.0));
    }

    #[test]
    fn tangled_patch_has_empty_domain() {
        let mut m = hex_mesh();
        // Pull one ring vertex across the centre: the star folds over itself.
        m.vertices[1] = Point::new2(-0.2, -0.9);
        let p = extract_patch(&m, 0).unwrap();
        assert!(matches!(halfspace_intersection(&p.domain), Polytope::Empty { .. }));
    }
}
