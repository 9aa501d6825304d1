//! Projected Weiszfeld iteration for the point minimizing the sum of
//! distances to a set of sites within a convex polygon.

use serde::Serialize;

use super::{check_tol, SpecialError};
use crate::geometry::{bbox, halfspace_intersection, project_onto_polygon, ConvexRegion, Point, Polytope};
use crate::mesh::Patch;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeberResult {
    pub point: Point,
    /// Sum of distances to the sites.
    pub objective: f64,
    pub iterations: usize,
    /// Norm of the projected steepest-descent direction at `point`; zero
    /// when a subgradient certifies optimality.
    pub gradient_norm: f64,
    /// Objective after each iterate, starting at the initial point.
    pub trace: Vec<f64>,
}

fn total_distance(sites: &[Point], x: &Point) -> f64 {
    sites.iter().map(|s| s.distance(x)).sum()
}

/// Projection of `g` onto the cone of directions `u` with `n . u <= 0` for
/// every active normal.
fn project_to_cone(g: Point, active: &[Point]) -> Point {
    let feasible = |u: &Point| active.iter().all(|n| n.dot(u) <= 1e-12 * u.norm().max(1e-300));
    let mut cands = vec![g];
    for n in active {
        cands.push(g - *n * n.dot(&g));
    }
    cands.push(Point::origin(g.dim()));
    cands
        .into_iter()
        .filter(feasible)
        .min_by(|a, b| a.distance(&g).total_cmp(&b.distance(&g)))
        .expect("zero is always feasible")
}

/// Minimize the sum of distances to `sites` over a bounded planar region.
pub fn weber_point(sites: &[Point], domain: &ConvexRegion, tol: f64) -> Result<WeberResult, SpecialError> {
    check_tol(tol)?;
    if sites.is_empty() {
        return Err(SpecialError::NoSites);
    }
    if domain.dim != 2 || sites.iter().any(|s| s.dim() != 2) {
        return Err(SpecialError::Unsupported("the Weber solver is planar".into()));
    }
    let poly = match halfspace_intersection(domain) {
        Polytope::Empty { .. } => return Err(SpecialError::EmptyKernel),
        Polytope::Unbounded { .. } => return Err(SpecialError::Unsupported("unbounded domain".into())),
        Polytope::Bounded { vertices } => vertices,
    };
    let mean = sites.iter().fold(Point::origin(2), |a, s| a + *s) / sites.len() as f64;
    weber_from(sites, domain, &poly, project_onto_polygon(&poly, &mean), tol)
}

/// Weber point of the patch's edge neighbours within its domain.
pub fn weber_place(patch: &Patch, tol: f64) -> Result<WeberResult, SpecialError> {
    weber_point(&patch.neighbors(), &patch.domain, tol)
}

pub(super) fn weber_from(
    sites: &[Point],
    domain: &ConvexRegion,
    poly: &[Point],
    start: Point,
    tol: f64,
) -> Result<WeberResult, SpecialError> {
    let mut all = sites.to_vec();
    all.extend_from_slice(poly);
    let scale = bbox(&all).map_or(1.0, |(lo, hi)| lo.distance(&hi).max(1e-300));
    let normals: Vec<_> = domain.normalized().halfspaces;
    let active = |x: &Point| -> Vec<Point> {
        normals.iter().filter(|h| h.slack(x) <= 1e-9 * scale).map(|h| h.normal).collect()
    };
    let proj = |p: &Point| project_onto_polygon(poly, p);

    let mut x = start;
    let mut f = total_distance(sites, &x);
    let mut trace = vec![f];
    let mut gnorm = f64::INFINITY;
    let mut iterations = 0;
    while iterations < 100_000 {
        iterations += 1;
        let near: Vec<usize> = (0..sites.len()).filter(|&i| sites[i].distance(&x) <= 1e-12 * scale).collect();
        if !near.is_empty() {
            // At a site the objective has a kink of size `near.len()`.
            x = sites[near[0]];
            f = total_distance(sites, &x);
            let r = sites
                .iter()
                .filter(|s| s.distance(&x) > 1e-12 * scale)
                .fold(Point::origin(2), |acc, s| acc + (x - *s) / x.distance(s));
            let g = project_to_cone(-r, &active(&x));
            let excess = g.norm() - near.len() as f64;
            if excess <= tol {
                gnorm = excess.max(0.0);
                break;
            }
            // Leave the site along the projected descent direction.
            let u = g / g.norm();
            let mut step = 0.5 * scale;
            let mut moved = false;
            while step > 1e-15 * scale {
                let y = proj(&(x + u * step));
                let fy = total_distance(sites, &y);
                if fy < f {
                    x = y;
                    f = fy;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            trace.push(f);
            if !moved {
                gnorm = excess;
                break;
            }
            continue;
        }
        let grad = sites.iter().fold(Point::origin(2), |acc, s| acc + (x - *s) / x.distance(s));
        gnorm = project_to_cone(-grad, &active(&x)).norm();
        if gnorm <= tol {
            break;
        }
        let (num, den) = sites.iter().fold((Point::origin(2), 0.0), |(n, d), s| {
            let w = 1.0 / x.distance(s);
            (n + *s * w, d + w)
        });
        let y = proj(&(num / den));
        let fy = total_distance(sites, &y);
        let step = y.distance(&x);
        if fy > f {
            // Rounding only; the surrogate step never increases the objective.
            break;
        }
        x = y;
        f = fy;
        trace.push(f);
        if step <= 1e-15 * scale {
            break;
        }
    }
    Ok(WeberResult { point: x, objective: f, iterations, gradient_norm: gnorm, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_region() -> ConvexRegion {
        ConvexRegion::cuboid(&Point::new2(0.0, 0.0), &Point::new2(1.0, 1.0))
    }

    fn corners() -> Vec<Point> {
        vec![
            Point::new2(0.0, 0.0),
            Point::new2(1.0, 0.0),
            Point::new2(1.0, 1.0),
            Point::new2(0.0, 1.0),
        ]
    }

    #[test]
    fn square_corners_from_off_centre() {
        let poly = halfspace_intersection(&square_region()).vertices().to_vec();
        let r = weber_from(&corners(), &square_region(), &poly, Point::new2(0.9, 0.15), 1e-12).unwrap();
        assert!(r.point.distance(&Point::new2(0.5, 0.5)) < 1e-6, "{r:?}");
        assert!(r.trace.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    #[test]
    fn collinear_median() {
        let sites = [Point::new2(0.0, 0.0), Point::new2(1.0, 0.0), Point::new2(2.0, 0.0)];
        let dom = ConvexRegion::cuboid(&Point::new2(-1.0, -1.0), &Point::new2(3.0, 1.0));
        let r = weber_point(&sites, &dom, 1e-10).unwrap();
        assert!(r.point.distance(&Point::new2(1.0, 0.0)) < 1e-9, "{r:?}");
        let poly = halfspace_intersection(&dom).vertices().to_vec();
        let r = weber_from(&sites, &dom, &poly, Point::new2(1.7, 0.6), 1e-10).unwrap();
        assert!(r.point.distance(&Point::new2(1.0, 0.0)) < 1e-6, "{r:?}");
    }

    #[test]
    fn constrained_to_boundary() {
        // Unconstrained optimum (0.5, 0.5) lies outside x >= 0.8.
        let dom = ConvexRegion::cuboid(&Point::new2(0.8, 0.0), &Point::new2(1.0, 1.0));
        let r = weber_point(&corners(), &dom, 1e-9).unwrap();
        assert!((r.point.x() - 0.8).abs() < 1e-9);
        assert!((r.point.y() - 0.5).abs() < 1e-6, "{r:?}");
        assert!(r.gradient_norm <= 1e-9);
    }
}
