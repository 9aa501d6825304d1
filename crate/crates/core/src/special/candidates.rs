//! Constraints bounded by lines and circles, and the points where their
//! boundaries meet.

use serde::Serialize;

use crate::geometry::{Ball, Halfspace, Point};

/// A planar constraint whose membership is one sign test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleLineConstraint {
    Halfplane(Halfspace),
    Disk(Ball),
    DiskComplement(Ball),
}

impl CircleLineConstraint {
    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        match self {
            CircleLineConstraint::Halfplane(h) => h.normalized().slack(p) >= -tol,
            CircleLineConstraint::Disk(b) => b.center.distance(p) <= b.radius + tol,
            CircleLineConstraint::DiskComplement(b) => b.center.distance(p) >= b.radius - tol,
        }
    }

    /// Distance from `p` to the constraint boundary.
    pub fn boundary_distance(&self, p: &Point) -> f64 {
        match self {
            CircleLineConstraint::Halfplane(h) => h.normalized().slack(p).abs(),
            CircleLineConstraint::Disk(b) | CircleLineConstraint::DiskComplement(b) => {
                (b.center.distance(p) - b.radius).abs()
            }
        }
    }

    fn circle(&self) -> Option<Ball> {
        match self {
            CircleLineConstraint::Disk(b) | CircleLineConstraint::DiskComplement(b) => Some(*b),
            CircleLineConstraint::Halfplane(_) => None,
        }
    }
}

/// Centre and radius of the circle through `a` and `b` on which the edge
/// `ab` is seen under angle `theta` from its left side.
fn inscribed_circle(a: &Point, b: &Point, theta: f64) -> Ball {
    let d = *b - *a;
    let len = d.norm();
    let left = d.perp() / len;
    let center = a.midpoint(b) + left * (0.5 * len / theta.tan());
    Ball { center, radius: len / (2.0 * theta.sin()) }
}

/// Constraints keeping every angle of the counterclockwise triangle
/// `(x, a, b)` at most `theta`. Empty when `theta >= pi`.
pub fn angle_constraints(a: &Point, b: &Point, theta: f64) -> Vec<CircleLineConstraint> {
    if theta >= std::f64::consts::PI {
        return Vec::new();
    }
    let theta = theta.max(1e-12);
    // Angle at a: x clockwise of b - a rotated by theta about a.
    let ra = (*b - *a).rotate2(theta);
    let ha = Halfspace::through(a, ra.perp());
    // Angle at b: x counterclockwise of a - b rotated by -theta about b.
    let rb = (*a - *b).rotate2(-theta);
    let hb = Halfspace::through(b, rb.perp() * -1.0);
    vec![
        CircleLineConstraint::Halfplane(ha),
        CircleLineConstraint::Halfplane(hb),
        CircleLineConstraint::DiskComplement(inscribed_circle(a, b, theta)),
    ]
}

/// Constraints keeping the circumradius of `(x, a, b)` at most `rho`, or
/// `None` if no position achieves it.
pub fn circumradius_constraints(a: &Point, b: &Point, rho: f64) -> Option<Vec<CircleLineConstraint>> {
    let len = a.distance(b);
    if !(rho >= 0.5 * len) {
        return None;
    }
    let t0 = (0.5 * len / rho).clamp(0.0, 1.0).asin();
    if t0 <= 0.0 {
        return Some(Vec::new());
    }
    Some(vec![
        CircleLineConstraint::Disk(inscribed_circle(a, b, t0)),
        CircleLineConstraint::DiskComplement(inscribed_circle(a, b, std::f64::consts::PI - t0)),
    ])
}

/// A point on the boundaries of the constraints it names.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidatePoint {
    pub location: Point,
    pub defining_constraints: Vec<usize>,
}

fn line_of(h: &Halfspace) -> (Point, f64) {
    let h = h.normalized();
    (h.normal, h.offset)
}

/// Intersections of all pairs of boundaries, plus extreme points of each
/// circle, circle centres, and the points of each circle closest to every
/// line and every other circle.
pub fn enumerate_candidates(constraints: &[CircleLineConstraint]) -> Vec<CandidatePoint> {
    let mut out = Vec::new();
    let mut push = |p: Point, ids: Vec<usize>| {
        if p.is_finite() {
            out.push(CandidatePoint { location: p, defining_constraints: ids });
        }
    };
    for (i, ci) in constraints.iter().enumerate() {
        if let Some(c) = ci.circle() {
            for u in [Point::new2(1.0, 0.0), Point::new2(0.0, 1.0)] {
                push(c.center + u * c.radius, vec![i]);
                push(c.center - u * c.radius, vec![i]);
            }
            push(c.center, vec![i]);
        }
        for (j, cj) in constraints.iter().enumerate().skip(i + 1) {
            match (ci, cj) {
                (CircleLineConstraint::Halfplane(h1), CircleLineConstraint::Halfplane(h2)) => {
                    let ((n1, o1), (n2, o2)) = (line_of(h1), line_of(h2));
                    let det = n1.cross2(&n2);
                    if det.abs() > 1e-14 {
                        push(
                            Point::new2((o1 * n2.y() - o2 * n1.y()) / det, (n1.x() * o2 - n2.x() * o1) / det),
                            vec![i, j],
                        );
                    }
                }
                (CircleLineConstraint::Halfplane(h), other) | (other, CircleLineConstraint::Halfplane(h)) => {
                    let c = other.circle().expect("non-halfplane has a circle");
                    let (n, o) = line_of(h);
                    let d = n.dot(&c.center) - o;
                    let foot = c.center - n * d;
                    push(c.center - n * c.radius, vec![i, j]);
                    push(c.center + n * c.radius, vec![i, j]);
                    if d.abs() <= c.radius {
                        let half = (c.radius * c.radius - d * d).max(0.0).sqrt();
                        let t = n.perp();
                        push(foot + t * half, vec![i, j]);
                        push(foot - t * half, vec![i, j]);
                    }
                }
                _ => {
                    let (c1, c2) = (ci.circle().unwrap(), cj.circle().unwrap());
                    let dv = c2.center - c1.center;
                    let dist = dv.norm();
                    if dist == 0.0 {
                        continue;
                    }
                    let u = dv / dist;
                    push(c1.center + u * c1.radius, vec![i, j]);
                    push(c1.center - u * c1.radius, vec![i, j]);
                    push(c2.center + u * c2.radius, vec![i, j]);
                    push(c2.center - u * c2.radius, vec![i, j]);
                    if dist <= c1.radius + c2.radius && dist >= (c1.radius - c2.radius).abs() {
                        let along = (dist * dist + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * dist);
                        let h = (c1.radius * c1.radius - along * along).max(0.0).sqrt();
                        let base = c1.center + u * along;
                        push(base + u.perp() * h, vec![i, j]);
                        push(base - u.perp() * h, vec![i, j]);
                    }
                }
            }
        }
    }
    out
}
