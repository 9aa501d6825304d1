//! Points, halfspaces, elementary measures and halfspace intersection.

pub(crate) mod lp;
mod measures;
mod point;
mod polytope;
mod region;

use thiserror::Error;

pub use measures::{
    angle_at, dihedral_angle, min_enclosing_ball, solid_angle, triangle_area, triangle_measures,
    TriangleMeasures,
};
pub(crate) use measures::solid_angle_units;
pub use point::{orient2, orient3, Point};
pub use polytope::{
    bbox, chebyshev_center, closest_on_segment, halfspace_intersection, project_onto_polygon,
    sort_ccw, star_kernel, Polytope,
};
pub use region::{Ball, ConvexRegion, Halfspace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero-length direction vector")]
    ZeroVector,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("a point needs 2 or 3 coordinates, got {0}")]
    BadArity(usize),
    #[error("non-finite coordinate")]
    NonFinite,
}
