use super::lp::{LinearProgram, LpOutcome};
use super::{Ball, ConvexRegion, GeometryError, Halfspace, Point};

/// Result of intersecting a set of halfspaces.
#[derive(Clone, Debug, PartialEq)]
pub enum Polytope {
    /// Vertices of a bounded intersection; counterclockwise in the plane.
    Bounded { vertices: Vec<Point> },
    /// `certificate` indexes a minimal infeasible subset (at most d + 1 halfspaces).
    Empty { certificate: Vec<usize> },
    /// A unit direction along which the intersection is unbounded.
    Unbounded { ray: Point },
}

impl Polytope {
    pub fn vertices(&self) -> &[Point] {
        match self {
            Polytope::Bounded { vertices } => vertices,
            _ => &[],
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Polytope::Empty { .. })
    }

    /// Axis-aligned bounding box of the vertices.
    pub fn bbox(&self) -> Option<(Point, Point)> {
        bbox(self.vertices())
    }
}

pub fn bbox(points: &[Point]) -> Option<(Point, Point)> {
    let first = points.first()?;
    let (mut lo, mut hi) = (*first, *first);
    for p in points {
        for k in 0..p.dim() {
            lo = lo.with_coord(k, lo[k].min(p[k]));
            hi = hi.with_coord(k, hi[k].max(p[k]));
        }
    }
    Some((lo, hi))
}

fn feasible(hs: &[Halfspace], idx: &[usize], dim: usize) -> bool {
    let mut lp = LinearProgram::new(dim);
    let mut row = vec![0.0; dim];
    for &i in idx {
        row.copy_from_slice(&hs[i].normal.coords()[..dim]);
        lp.add_le(&row, hs[i].offset);
    }
    !matches!(lp.minimize(), LpOutcome::Infeasible)
}

/// Intersect the halfspaces of `region`.
pub fn halfspace_intersection(region: &ConvexRegion) -> Polytope {
    let dim = region.dim;
    let hs: Vec<Halfspace> = region.normalized().halfspaces;
    let all: Vec<usize> = (0..hs.len()).collect();
    if !feasible(&hs, &all, dim) {
        // Deletion filter down to an irreducible infeasible subset.
        let mut keep = all;
        let mut i = 0;
        while i < keep.len() {
            let mut trial = keep.clone();
            trial.remove(i);
            if !feasible(&hs, &trial, dim) {
                keep = trial;
            } else {
                i += 1;
            }
        }
        return Polytope::Empty { certificate: keep };
    }
    if let Some(ray) = recession_ray(&hs, dim) {
        return Polytope::Unbounded { ray };
    }
    Polytope::Bounded { vertices: enumerate_vertices(&hs, dim) }
}

fn recession_ray(hs: &[Halfspace], dim: usize) -> Option<Point> {
    for k in 0..dim {
        for sign in [1.0, -1.0] {
            let mut lp = LinearProgram::new(dim);
            for j in 0..dim {
                lp.set_bounds(j, -1.0, 1.0);
            }
            lp.set_cost(k, -sign);
            for h in hs {
                lp.add_le(&h.normal.coords()[..dim], 0.0);
            }
            if let LpOutcome::Optimal { x, objective } = lp.minimize() {
                if -objective > 1e-9 {
                    let r = Point::from_slice(&x).expect("finite ray");
                    return r.normalized();
                }
            }
        }
    }
    None
}

/// Solve the d x d system `n_i . x = b_i` for the given halfspaces.
fn intersect_planes(h: &[&Halfspace]) -> Option<Point> {
    match h.len() {
        2 => {
            let (a, b) = (h[0].normal, h[1].normal);
            let det = a.cross2(&b);
            if det.abs() < 1e-12 {
                return None;
            }
            Some(Point::new2(
                (h[0].offset * b.y() - h[1].offset * a.y()) / det,
                (a.x() * h[1].offset - b.x() * h[0].offset) / det,
            ))
        }
        3 => {
            let (n1, n2, n3) = (h[0].normal, h[1].normal, h[2].normal);
            let c23 = n2.cross(&n3);
            let det = n1.dot(&c23);
            if det.abs() < 1e-12 {
                return None;
            }
            let p = (c23 * h[0].offset + n3.cross(&n1) * h[1].offset + n1.cross(&n2) * h[2].offset) / det;
            Some(p)
        }
        _ => None,
    }
}

fn enumerate_vertices(hs: &[Halfspace], dim: usize) -> Vec<Point> {
    let n = hs.len();
    let mut out: Vec<Point> = Vec::new();
    let push = |p: Point, out: &mut Vec<Point>| {
        let tol = 1e-9 * (1.0 + p.max_abs());
        if hs.iter().all(|h| h.slack(&p) >= -tol) && !out.iter().any(|q| q.distance(&p) <= tol) {
            out.push(p);
        }
    };
    if dim == 2 {
        for i in 0..n {
            for j in i + 1..n {
                if let Some(p) = intersect_planes(&[&hs[i], &hs[j]]) {
                    push(p, &mut out);
                }
            }
        }
        sort_ccw(&mut out);
    } else {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if let Some(p) = intersect_planes(&[&hs[i], &hs[j], &hs[k]]) {
                        push(p, &mut out);
                    }
                }
            }
        }
    }
    out
}

/// Sort planar points counterclockwise about their centroid.
pub fn sort_ccw(pts: &mut [Point]) {
    if pts.is_empty() {
        return;
    }
    let c = pts.iter().fold(Point::origin(2), |a, p| a + *p) / pts.len() as f64;
    pts.sort_by(|a, b| {
        let ta = (a.y() - c.y()).atan2(a.x() - c.x());
        let tb = (b.y() - c.y()).atan2(b.x() - c.x());
        ta.total_cmp(&tb)
    });
}

/// Largest ball inside the region, or `None` if the region is empty.
/// The radius is capped at 1e9 for regions containing arbitrarily large balls.
pub fn chebyshev_center(region: &ConvexRegion) -> Option<Ball> {
    let dim = region.dim;
    let mut lp = LinearProgram::new(dim + 1);
    lp.set_cost(dim, -1.0);
    lp.set_bounds(dim, 0.0, 1e9);
    let mut row = vec![0.0; dim + 1];
    for h in region.normalized().halfspaces {
        row[..dim].copy_from_slice(&h.normal.coords()[..dim]);
        row[dim] = 1.0;
        lp.add_le(&row, h.offset);
    }
    match lp.minimize() {
        LpOutcome::Optimal { x, .. } => Some(Ball {
            center: Point::from_slice(&x[..dim]).ok()?,
            radius: x[dim],
        }),
        _ => None,
    }
}

/// Kernel of a counterclockwise star polygon: the points that see every vertex.
pub fn star_kernel(polygon: &[Point]) -> Result<ConvexRegion, GeometryError> {
    if polygon.len() < 3 {
        return Err(GeometryError::Degenerate(format!(
            "polygon needs at least 3 vertices, got {}",
            polygon.len()
        )));
    }
    let n = polygon.len();
    let mut r = ConvexRegion::new(2);
    for i in 0..n {
        let (p, q) = (polygon[i], polygon[(i + 1) % n]);
        if p.distance(&q) == 0.0 {
            return Err(GeometryError::Degenerate(format!("repeated polygon vertex {i}")));
        }
        r.push(Halfspace::left_of(&p, &q));
    }
    Ok(r)
}

/// Closest point of a convex counterclockwise polygon to `p`.
pub fn project_onto_polygon(poly: &[Point], p: &Point) -> Point {
    let n = poly.len();
    if n == 1 {
        return poly[0];
    }
    let inside = n >= 3 && (0..n).all(|i| (poly[(i + 1) % n] - poly[i]).cross2(&(*p - poly[i])) >= 0.0);
    if inside {
        return *p;
    }
    let mut best = poly[0];
    let mut best_d = f64::INFINITY;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let q = closest_on_segment(&a, &b, p);
        let d = q.distance(p);
        if d < best_d {
            best_d = d;
            best = q;
        }
    }
    best
}

pub fn closest_on_segment(a: &Point, b: &Point, p: &Point) -> Point {
    let ab = *b - *a;
    let l2 = ab.norm_sq();
    if l2 == 0.0 {
        return *a;
    }
    let t = ((*p - *a).dot(&ab) / l2).clamp(0.0, 1.0);
    *a + ab * t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(x: f64, y: f64) -> Point {
        Point::new2(x, y)
    }

    #[test]
    fn unit_square() {
        let r = ConvexRegion::cuboid(&p2(0.0, 0.0), &p2(1.0, 1.0));
        let poly = halfspace_intersection(&r);
        let v = poly.vertices();
        assert_eq!(v.len(), 4);
        let area: f64 = (0..4).map(|i| v[i].cross2(&v[(i + 1) % 4])).sum::<f64>() / 2.0;
        assert!((area - 1.0).abs() < 1e-12, "ccw order gives positive area");
    }

    #[test]
    fn empty_with_certificate() {
        let mut r = ConvexRegion::cuboid(&p2(0.0, 0.0), &p2(1.0, 1.0));
        r.push(Halfspace { normal: p2(-1.0, -1.0), offset: -3.0 });
        match halfspace_intersection(&r) {
            Polytope::Empty { certificate } => {
                assert!(certificate.len() <= 3);
                let sub = r.subset(&certificate);
                assert!(halfspace_intersection(&sub).is_empty());
                assert!(certificate.contains(&4));
            }
            other => panic!("expected empty, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_has_ray() {
        let mut r = ConvexRegion::new(2);
        r.push(Halfspace { normal: p2(-1.0, 0.0), offset: 0.0 });
        r.push(Halfspace { normal: p2(0.0, -1.0), offset: 0.0 });
        match halfspace_intersection(&r) {
            Polytope::Unbounded { ray } => {
                assert!(r.halfspaces.iter().all(|h| h.normal.dot(&ray) <= 1e-12));
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn cube_has_eight_vertices() {
        let r = ConvexRegion::cuboid(&Point::new3(-1.0, -1.0, -1.0), &Point::new3(1.0, 1.0, 1.0));
        assert_eq!(halfspace_intersection(&r).vertices().len(), 8);
    }

    #[test]
    fn chebyshev_of_rectangle() {
        let r = ConvexRegion::cuboid(&p2(0.0, 0.0), &p2(4.0, 2.0));
        let b = chebyshev_center(&r).unwrap();
        assert!((b.radius - 1.0).abs() < 1e-9);
        assert!((b.center.y() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kernel_of_arrow() {
        // Nonconvex but star-shaped; the reflex vertex at (0.5, 0.5) cuts the kernel.
        let poly = [p2(0.0, 0.0), p2(2.0, 0.0), p2(2.0, 2.0), p2(0.5, 0.5), p2(0.0, 2.0)];
        let k = star_kernel(&poly).unwrap();
        assert!(k.contains(&p2(0.3, 0.2), 0.0));
        assert!(!k.contains(&p2(1.0, 1.5), 0.0));
    }

    #[test]
    fn projection_onto_square() {
        let sq = [p2(0.0, 0.0), p2(1.0, 0.0), p2(1.0, 1.0), p2(0.0, 1.0)];
        assert_eq!(project_onto_polygon(&sq, &p2(0.5, 0.5)), p2(0.5, 0.5));
        assert_eq!(project_onto_polygon(&sq, &p2(2.0, 0.5)), p2(1.0, 0.5));
        assert_eq!(project_onto_polygon(&sq, &p2(2.0, 3.0)), p2(1.0, 1.0));
    }
}
