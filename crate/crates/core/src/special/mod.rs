//! Placement for criteria whose sublevel sets are not convex: minimizing the
//! largest angle or circumradius by bisection over candidate points, a grid
//! search for the remaining kinds, and the Fermat-Weber point of the
//! neighbours restricted to the kernel.

mod candidates;
mod weber;

use serde::Serialize;
use thiserror::Error;

use crate::criteria::{CostTerm, Criterion, CriterionKind, ElementKind};
use crate::geometry::{chebyshev_center, halfspace_intersection, ConvexRegion, Halfspace, Point, Polytope};
use crate::mesh::Patch;
use crate::qcp::{grid_oracle_with, term_cost, OracleOptions, QuasiconvexProgram, SolverResult};

pub use candidates::{
    angle_constraints, circumradius_constraints, enumerate_candidates, CandidatePoint, CircleLineConstraint,
};
pub use weber::{weber_place, weber_point, WeberResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("the kernel of the patch is empty")]
    EmptyKernel,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("{0}")]
    Unsupported(String),
    #[error("no sites given")]
    NoSites,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialResult {
    pub point: Point,
    /// Weighted cost at `point`.
    pub objective: f64,
    /// Largest threshold proven infeasible.
    pub lower_bound: f64,
    pub iterations: usize,
}

/// Minimize the largest angle of the triangles of a planar patch.
pub fn minmax_angle_place(patch: &Patch, tol_theta: f64) -> Result<SpecialResult, SpecialError> {
    minmax_place(patch, &[Criterion::new(CriterionKind::MaxAngle)], tol_theta)
}

/// Minimize the largest circumradius of the triangles of a planar patch.
pub fn minmax_circumradius_place(patch: &Patch, tol: f64) -> Result<SpecialResult, SpecialError> {
    minmax_place(patch, &[Criterion::new(CriterionKind::Circumradius)], tol)
}

/// Whether [`minmax_place`] handles this criterion kind.
pub fn is_circle_line_kind(kind: CriterionKind) -> bool {
    matches!(kind, CriterionKind::MaxAngle | CriterionKind::Circumradius)
}

/// Feasible set of one weighted term at threshold `t`; `None` if empty.
fn term_constraints(term: &CostTerm, t: f64) -> Option<Vec<CircleLineConstraint>> {
    let (a, b) = (&term.stencil.fixed[0], &term.stencil.fixed[1]);
    let level = t / term.criterion.weight;
    match term.criterion.kind {
        CriterionKind::MaxAngle => Some(angle_constraints(a, b, level)),
        CriterionKind::Circumradius => circumradius_constraints(a, b, level),
        _ => unreachable!("checked by caller"),
    }
}

/// A cost no placement can beat, per term.
fn unavoidable(term: &CostTerm) -> f64 {
    let w = term.criterion.weight;
    match term.criterion.kind {
        CriterionKind::MaxAngle => w * std::f64::consts::FRAC_PI_3,
        CriterionKind::Circumradius => w * 0.5 * term.stencil.fixed[0].distance(&term.stencil.fixed[1]),
        _ => unreachable!("checked by caller"),
    }
}

fn check_tol(tol: f64) -> Result<(), SpecialError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(SpecialError::BadTolerance(tol))
    }
}

/// Interior point of the domain, or an error if it has no interior.
pub(crate) fn interior_point(domain: &ConvexRegion, scale: f64) -> Result<Point, SpecialError> {
    match chebyshev_center(domain) {
        Some(b) if b.radius > 1e-12 * scale => Ok(b.center),
        _ => Err(SpecialError::EmptyKernel),
    }
}

/// Minimize the weighted maximum of max-angle and circumradius terms over
/// the patch domain.
///
/// Bisects on the threshold. For a given threshold each term's feasible set
/// is cut out by halfplanes, disks and disk complements; a nonempty
/// intersection has a point on two boundaries (or on one circle), so it
/// suffices to try every such candidate.
pub fn minmax_place(patch: &Patch, criteria: &[Criterion], tol: f64) -> Result<SpecialResult, SpecialError> {
    check_tol(tol)?;
    if patch.dim() != 2 || patch.stencils.iter().any(|s| s.kind != ElementKind::Triangle) {
        return Err(SpecialError::Unsupported("candidate search needs a planar triangle patch".into()));
    }
    if let Some(c) = criteria.iter().find(|c| !is_circle_line_kind(c.kind)) {
        return Err(SpecialError::Unsupported(format!("candidate search does not handle `{}`", c.kind)));
    }
    if criteria.is_empty() {
        return Err(SpecialError::Unsupported("no criteria given".into()));
    }
    let mut terms = Vec::new();
    for c in criteria {
        for s in &patch.stencils {
            terms.push(CostTerm::new(*c, s.clone()).map_err(|e| SpecialError::Unsupported(e.to_string()))?);
        }
    }
    let domain = patch.domain.normalized();
    let scale = {
        let prog = QuasiconvexProgram::new(domain.clone(), terms.clone()).expect("terms are planar");
        prog.scale(None)
    };
    let dom_tol = 1e-9 * scale;
    let mut buf = Vec::with_capacity(4);
    let mut cost = |x: &Point| -> f64 {
        if !domain.contains(x, dom_tol) {
            return f64::INFINITY;
        }
        terms.iter().map(|t| term_cost(t, x, &mut buf)).fold(f64::NEG_INFINITY, f64::max)
    };

    let center = interior_point(&domain, scale)?;
    let (mut best, mut hi) = (center, cost(&center));
    if domain.contains(&patch.position, 0.0) {
        let c = cost(&patch.position);
        if c < hi {
            best = patch.position;
            hi = c;
        }
    }
    let mut lo = terms.iter().map(unavoidable).fold(f64::NEG_INFINITY, f64::max);
    let domain_cons: Vec<CircleLineConstraint> =
        domain.halfspaces.iter().map(|h: &Halfspace| CircleLineConstraint::Halfplane(*h)).collect();
    let mut iterations = 0;
    while hi - lo > tol && iterations < 60 {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let mut cons = domain_cons.clone();
        let mut possible = true;
        for t in &terms {
            match term_constraints(t, mid) {
                Some(c) => cons.extend(c),
                None => {
                    possible = false;
                    break;
                }
            }
        }
        let mut found: Option<(Point, f64)> = None;
        if possible {
            let slack = 1e-12 * mid.abs().max(1.0);
            for cand in enumerate_candidates(&cons) {
                let c = cost(&cand.location);
                if c <= mid + slack && found.map_or(true, |(_, fc)| c < fc) {
                    found = Some((cand.location, c));
                }
            }
        }
        match found {
            Some((p, c)) => {
                if c < hi {
                    best = p;
                    hi = c;
                } else {
                    hi = mid;
                }
            }
            None => lo = mid,
        }
    }
    Ok(SpecialResult { point: best, objective: cost(&best), lower_bound: lo, iterations })
}

/// Grid search for any mixture, used for kinds without a dedicated solver.
pub fn nonconvex_grid_place(
    patch: &Patch,
    criteria: &[Criterion],
    opts: &OracleOptions,
) -> Result<SolverResult, SpecialError> {
    let terms = patch.terms(criteria).map_err(|e| SpecialError::Unsupported(e.to_string()))?;
    if let Polytope::Empty { .. } = halfspace_intersection(&patch.domain) {
        return Err(SpecialError::EmptyKernel);
    }
    let prog = QuasiconvexProgram::new(patch.domain.clone(), terms).map_err(|e| SpecialError::Unsupported(e.to_string()))?;
    grid_oracle_with(&prog, opts).map_err(|e| SpecialError::Unsupported(e.to_string()))
}
