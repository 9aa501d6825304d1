use serde::{Deserialize, Serialize};

use super::{GeometryError, Point};

/// The closed halfspace `normal . p <= offset`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Point, offset: f64) -> Result<Self, GeometryError> {
        if !(normal.norm() > 0.0) || !offset.is_finite() || !normal.is_finite() {
            return Err(GeometryError::ZeroVector);
        }
        Ok(Halfspace { normal, offset })
    }

    /// Halfspace whose boundary passes through `p` with outward `normal`.
    pub fn through(p: &Point, normal: Point) -> Self {
        Halfspace { normal, offset: normal.dot(p) }
    }

    /// Points on or to the left of the directed planar line `p -> q`.
    pub fn left_of(p: &Point, q: &Point) -> Self {
        let d = *q - *p;
        Halfspace::through(p, Point::new2(d.y(), -d.x()))
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `offset - normal . p`; nonnegative inside.
    pub fn slack(&self, p: &Point) -> f64 {
        self.offset - self.normal.dot(p)
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.slack(p) >= -tol
    }

    /// Same set with a unit normal.
    pub fn normalized(&self) -> Halfspace {
        let n = self.normal.norm();
        Halfspace { normal: self.normal / n, offset: self.offset / n }
    }
}

/// A closed ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.center.distance(p) <= self.radius + tol
    }
}

/// Intersection of finitely many halfspaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexRegion {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
}

impl ConvexRegion {
    pub fn new(dim: usize) -> Self {
        ConvexRegion { dim, halfspaces: Vec::new() }
    }

    pub fn from_halfspaces(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self, GeometryError> {
        for h in &halfspaces {
            if h.dim() != dim {
                return Err(GeometryError::DimensionMismatch { expected: dim, got: h.dim() });
            }
        }
        Ok(ConvexRegion { dim, halfspaces })
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn cuboid(lo: &Point, hi: &Point) -> Self {
        let dim = lo.dim();
        let mut r = ConvexRegion::new(dim);
        r.push_box(lo, hi);
        r
    }

    pub fn push(&mut self, h: Halfspace) {
        debug_assert_eq!(h.dim(), self.dim);
        self.halfspaces.push(h);
    }

    pub fn push_box(&mut self, lo: &Point, hi: &Point) {
        for k in 0..self.dim {
            let e = Point::axis(self.dim, k);
            self.halfspaces.push(Halfspace { normal: e, offset: hi[k] });
            self.halfspaces.push(Halfspace { normal: -e, offset: -lo[k] });
        }
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.contains(p, tol))
    }

    /// Smallest slack over all halfspaces (negative outside).
    pub fn min_slack(&self, p: &Point) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| h.slack(p) / h.normal.norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn subset(&self, indices: &[usize]) -> ConvexRegion {
        ConvexRegion {
            dim: self.dim,
            halfspaces: indices.iter().map(|&i| self.halfspaces[i]).collect(),
        }
    }

    pub fn normalized(&self) -> ConvexRegion {
        ConvexRegion {
            dim: self.dim,
            halfspaces: self.halfspaces.iter().map(Halfspace::normalized).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_of_is_counterclockwise_interior() {
        let h = Halfspace::left_of(&Point::new2(0.0, 0.0), &Point::new2(1.0, 0.0));
        assert!(h.contains(&Point::new2(0.5, 1.0), 0.0));
        assert!(!h.contains(&Point::new2(0.5, -1.0), 0.0));
    }

    #[test]
    fn cuboid_membership() {
        let r = ConvexRegion::cuboid(&Point::new3(0.0, 0.0, 0.0), &Point::new3(1.0, 2.0, 3.0));
        assert_eq!(r.len(), 6);
        assert!(r.contains(&Point::new3(0.5, 1.9, 0.1), 0.0));
        assert!(!r.contains(&Point::new3(0.5, 2.1, 0.1), 0.0));
        assert!((r.min_slack(&Point::new3(0.5, 1.0, 1.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_normal_rejected() {
        assert!(Halfspace::new(Point::new2(0.0, 0.0), 1.0).is_err());
    }
}
