//! Exhaustive grid search, refined around the incumbent.

use std::cmp::Ordering;

use super::{
    activity_tol, lex_compare, term_cost, CostFunction, LexValue, QuasiconvexProgram, SolveError,
    SolveStatus, SolverResult,
};
use crate::geometry::{halfspace_intersection, Point, Polytope};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleOptions {
    /// Grid points per axis.
    pub resolution: usize,
    /// Number of shrinking refinement rounds after the initial grid.
    pub levels: usize,
    /// Box shrink factor per refinement round.
    pub shrink: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { resolution: 64, levels: 3, shrink: 4.0 }
    }
}

pub fn grid_oracle<C: CostFunction>(
    program: &QuasiconvexProgram<C>,
    levels: usize,
) -> Result<SolverResult, SolveError> {
    grid_oracle_with(program, &OracleOptions { levels, ..OracleOptions::default() })
}

/// Evaluate the objective on cell centres of a grid over the bounding box of
/// the domain, then repeatedly shrink the box around the best point. When
/// the best point sits in a boundary cell of the box and the box edge is
/// inside the domain's bounding box, the box slides to it without shrinking
/// (at most `2 * levels` times), so long thin sublevel sets are followed.
/// Works for any cost, quasiconvex or not. Ties are broken lexicographically.
pub fn grid_oracle_with<C: CostFunction>(
    program: &QuasiconvexProgram<C>,
    opts: &OracleOptions,
) -> Result<SolverResult, SolveError> {
    let dim = program.dim();
    let (lo, hi) = match halfspace_intersection(&program.domain) {
        Polytope::Empty { .. } => {
            return Ok(SolverResult {
                optimum: LexValue { t: f64::INFINITY, x: Point::origin(dim) },
                active_terms: vec![],
                iterations: 0,
                status: SolveStatus::EmptyDomain,
                trace: vec![],
            })
        }
        Polytope::Unbounded { .. } => return Err(SolveError::UnboundedDomain),
        p @ Polytope::Bounded { .. } => p.bbox().expect("bounded polytope has vertices"),
    };
    let domain = program.domain.normalized();
    let scale = lo.distance(&hi).max(program.scale(None) * 1e-9);
    let tol = 1e-12 * scale;
    let res = opts.resolution.max(1);
    let mut center = lo.midpoint(&hi);
    let mut half = [0.0; 3];
    for k in 0..dim {
        half[k] = 0.5 * (hi[k] - lo[k]);
    }
    let mut order: Vec<usize> = (0..program.terms.len()).collect();
    let mut buf = Vec::with_capacity(8);
    let mut best: Option<LexValue> = None;
    let mut trace = Vec::new();
    let total = res.pow(dim as u32);
    let mut shrinks = 0;
    let mut slides = 0;
    loop {
        for idx in 0..total {
            let mut p = Point::origin(dim);
            let mut rem = idx;
            for k in 0..dim {
                let i = rem % res;
                rem /= res;
                let h = 2.0 * half[k] / res as f64;
                p = p.with_coord(k, center[k] - half[k] + (i as f64 + 0.5) * h);
            }
            if !domain.contains(&p, tol) {
                continue;
            }
            let bound = best.map_or(f64::INFINITY, |b| b.t);
            let mut m = f64::NEG_INFINITY;
            let mut pruned = false;
            for pos in 0..order.len() {
                let c = term_cost(&program.terms[order[pos]], &p, &mut buf);
                m = m.max(c);
                if m > bound || m == f64::INFINITY {
                    // Move the pruning term to the front; it is likely to prune neighbours too.
                    order[..=pos].rotate_right(1);
                    pruned = true;
                    break;
                }
            }
            if pruned {
                continue;
            }
            let cand = LexValue { t: m, x: p };
            if best.map_or(true, |b| lex_compare(&cand, &b) == Ordering::Less) {
                best = Some(cand);
            }
        }
        let Some(b) = best else { break };
        trace.push(b.t);
        let at_edge = (0..dim).any(|k| {
            let cell = 2.0 * half[k] / res as f64;
            let off = b.x[k] - center[k];
            (off > half[k] - 1.5 * cell && center[k] + half[k] < hi[k] - tol)
                || (off < -half[k] + 1.5 * cell && center[k] - half[k] > lo[k] + tol)
        });
        center = b.x;
        if at_edge && slides < 2 * opts.levels {
            slides += 1;
            continue;
        }
        if shrinks == opts.levels {
            break;
        }
        shrinks += 1;
        for h in half.iter_mut() {
            *h /= opts.shrink;
        }
    }
    let Some(best) = best else {
        return Ok(SolverResult {
            optimum: LexValue { t: f64::INFINITY, x: lo.midpoint(&hi) },
            active_terms: vec![],
            iterations: opts.levels,
            status: SolveStatus::EmptyDomain,
            trace,
        });
    };
    let delta = activity_tol(best.t, 1e-8, 1e-6);
    Ok(SolverResult {
        optimum: best,
        active_terms: program.active_terms(&best.x, best.t, delta),
        iterations: opts.levels,
        status: SolveStatus::Converged,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexRegion;

    #[derive(Clone)]
    struct Dist(Point);

    impl CostFunction for Dist {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn components(&self, x: &Point, out: &mut Vec<f64>) {
            out.clear();
            out.push(x.distance(&self.0));
        }
        fn support(&self) -> Vec<Point> {
            vec![self.0]
        }
    }

    #[test]
    fn finds_nearest_point_in_box() {
        let prog = QuasiconvexProgram::new(
            ConvexRegion::cuboid(&Point::new2(0.0, 0.0), &Point::new2(1.0, 1.0)),
            vec![Dist(Point::new2(0.37, 0.61))],
        )
        .unwrap();
        let r = grid_oracle(&prog, 5).unwrap();
        assert!(r.optimum.t < 1e-4);
        assert!(r.optimum.x.distance(&Point::new2(0.37, 0.61)) < 1e-4);
    }

    #[test]
    fn three_dimensional() {
        let prog = QuasiconvexProgram::new(
            ConvexRegion::cuboid(&Point::new3(0.0, 0.0, 0.0), &Point::new3(1.0, 1.0, 1.0)),
            vec![Dist(Point::new3(2.0, 0.5, 0.5))],
        )
        .unwrap();
        let r = grid_oracle_with(&prog, &OracleOptions { resolution: 16, levels: 4, shrink: 4.0 }).unwrap();
        assert!((r.optimum.t - 1.0).abs() < 1e-3);
    }

    #[test]
    fn deterministic() {
        let prog = QuasiconvexProgram::new(
            ConvexRegion::cuboid(&Point::new2(-1.0, -1.0), &Point::new2(1.0, 1.0)),
            vec![Dist(Point::new2(0.1, 0.2)), Dist(Point::new2(-0.4, 0.3))],
        )
        .unwrap();
        assert_eq!(grid_oracle(&prog, 3).unwrap(), grid_oracle(&prog, 3).unwrap());
    }
}
