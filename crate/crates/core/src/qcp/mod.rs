//! Quasiconvex programming: minimize the maximum of quasiconvex costs over a
//! convex domain, with a brute-force grid oracle for cross-checking.

mod glp;
mod oracle;
mod solver;

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::criteria::{CostTerm, Quasiconvexity};
use crate::geometry::{ConvexRegion, Point};

pub use glp::{check_glp_monotonicity, check_glp_monotonicity_with, GlpReport, GlpViolation};
pub use oracle::{grid_oracle, grid_oracle_with, OracleOptions};
pub use solver::{solve, solve_with, SolverOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("term {index} ({label}) is not quasiconvex; use a special-purpose solver")]
    NotQuasiconvex { index: usize, label: String },
    #[error("start point {0:?} lies outside the feasible domain")]
    StartOutsideDomain(Point),
    #[error("the feasible domain is unbounded")]
    UnboundedDomain,
    #[error("dimension mismatch: program is {expected}D, got {got}D")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("program has no cost terms")]
    NoTerms,
    #[error("subset pair {0} is not nested")]
    NotNested(usize),
    #[error("term index {0} out of range")]
    BadIndex(usize),
}

/// A cost that is the maximum of finitely many smooth pieces.
pub trait CostFunction: Sync {
    fn dim(&self) -> usize;

    fn weight(&self) -> f64 {
        1.0
    }

    fn quasiconvexity(&self) -> Quasiconvexity {
        Quasiconvexity::Yes
    }

    /// Replace `out` with the unweighted pieces at `x`; the cost is their max.
    /// A single `+inf` piece marks an invalid position.
    fn components(&self, x: &Point, out: &mut Vec<f64>);

    /// Points that set the length scale of the term.
    fn support(&self) -> Vec<Point>;

    fn label(&self) -> String {
        String::from("term")
    }
}

impl CostFunction for CostTerm {
    fn dim(&self) -> usize {
        self.stencil.dim()
    }

    fn weight(&self) -> f64 {
        self.criterion.weight
    }

    fn quasiconvexity(&self) -> Quasiconvexity {
        self.criterion.quasiconvexity()
    }

    fn components(&self, x: &Point, out: &mut Vec<f64>) {
        CostTerm::components(self, x, out)
    }

    fn support(&self) -> Vec<Point> {
        self.stencil.fixed.clone()
    }

    fn label(&self) -> String {
        format!("{} on {}", self.criterion.kind, self.stencil.kind)
    }
}

/// Weighted cost of one term (max of its weighted pieces).
pub fn term_cost<C: CostFunction + ?Sized>(term: &C, x: &Point, buf: &mut Vec<f64>) -> f64 {
    term.components(x, buf);
    let m = buf.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::INFINITY {
        m
    } else {
        term.weight() * m
    }
}

/// The objective paired with its minimizer; ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LexValue {
    pub t: f64,
    pub x: Point,
}

/// Compare by `t`, then by the coordinates of `x`.
pub fn lex_compare(u: &LexValue, v: &LexValue) -> Ordering {
    u.t.total_cmp(&v.t).then_with(|| u.x.lex_cmp(&v.x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    IterationCap,
    EmptyDomain,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverResult {
    pub optimum: LexValue,
    /// Terms whose cost is within the activity tolerance of the optimum.
    pub active_terms: Vec<usize>,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Objective after each accepted step, starting with the initial value.
    pub trace: Vec<f64>,
}

/// Minimize `max_i w_i f_i(x)` over a convex domain.
#[derive(Clone, Debug)]
pub struct QuasiconvexProgram<C = CostTerm> {
    pub domain: ConvexRegion,
    pub terms: Vec<C>,
}

impl<C: CostFunction> QuasiconvexProgram<C> {
    pub fn new(domain: ConvexRegion, terms: Vec<C>) -> Result<Self, SolveError> {
        if terms.is_empty() {
            return Err(SolveError::NoTerms);
        }
        for t in &terms {
            if t.dim() != domain.dim {
                return Err(SolveError::DimensionMismatch { expected: domain.dim, got: t.dim() });
            }
        }
        Ok(QuasiconvexProgram { domain, terms })
    }

    pub fn dim(&self) -> usize {
        self.domain.dim
    }

    /// Maximum weighted term cost, ignoring the domain.
    pub fn cost(&self, x: &Point) -> f64 {
        let mut buf = Vec::with_capacity(8);
        self.terms
            .iter()
            .map(|t| term_cost(t, x, &mut buf))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices of terms whose weighted cost at `x` is within `delta` of `t`.
    pub fn active_terms(&self, x: &Point, t: f64, delta: f64) -> Vec<usize> {
        let mut buf = Vec::with_capacity(8);
        (0..self.terms.len())
            .filter(|&i| term_cost(&self.terms[i], x, &mut buf) >= t - delta)
            .collect()
    }

    /// Length scale: diagonal of the bounding box of all term supports.
    pub fn scale(&self, extra: Option<&Point>) -> f64 {
        let mut pts: Vec<Point> = self.terms.iter().flat_map(|t| t.support()).collect();
        pts.extend(extra.copied());
        match crate::geometry::bbox(&pts) {
            Some((lo, hi)) if lo.distance(&hi) > 0.0 => lo.distance(&hi),
            _ => 1.0,
        }
    }
}

impl<C: CostFunction + Clone> QuasiconvexProgram<C> {
    /// The program restricted to the given terms.
    pub fn subprogram(&self, indices: &[usize]) -> Result<Self, SolveError> {
        let terms = indices
            .iter()
            .map(|&i| self.terms.get(i).cloned().ok_or(SolveError::BadIndex(i)))
            .collect::<Result<Vec<_>, _>>()?;
        QuasiconvexProgram::new(self.domain.clone(), terms)
    }
}

/// Activity tolerance used for reporting active terms.
pub(crate) fn activity_tol(t: f64, abs: f64, rel: f64) -> f64 {
    abs.max(rel * t.abs())
}
