//! Empirical checks of the generalized-linear-programming properties using
//! the grid oracle: monotonicity under adding terms, and that adding a term
//! that is already satisfied at the optimum leaves the value unchanged.

use std::collections::HashMap;

use serde::Serialize;

use super::{grid_oracle_with, term_cost, CostFunction, OracleOptions, QuasiconvexProgram, SolveError, SolveStatus};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlpViolation {
    pub pair: usize,
    pub t_subset: f64,
    pub t_superset: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GlpReport {
    pub pairs_checked: usize,
    pub violations: Vec<GlpViolation>,
    /// Added terms already satisfied at the subset optimum.
    pub locality_checks: usize,
    pub locality_violations: usize,
}

impl GlpReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.locality_violations == 0
    }
}

/// Check `f(A) <= f(B)` for each nested pair `A` within `B`, with the default
/// oracle (6 refinement levels) and relative tolerance 1e-4, which is above
/// the grid's resolution error.
pub fn check_glp_monotonicity<C: CostFunction + Clone>(
    program: &QuasiconvexProgram<C>,
    pairs: &[(Vec<usize>, Vec<usize>)],
) -> Result<GlpReport, SolveError> {
    check_glp_monotonicity_with(program, pairs, &OracleOptions { levels: 6, ..OracleOptions::default() }, 1e-4)
}

pub fn check_glp_monotonicity_with<C: CostFunction + Clone>(
    program: &QuasiconvexProgram<C>,
    pairs: &[(Vec<usize>, Vec<usize>)],
    opts: &OracleOptions,
    rel_tol: f64,
) -> Result<GlpReport, SolveError> {
    let mut cache: HashMap<Vec<usize>, (f64, crate::geometry::Point)> = HashMap::new();
    let mut value = |set: &[usize]| -> Result<(f64, crate::geometry::Point), SolveError> {
        let mut key = set.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(v) = cache.get(&key) {
            return Ok(*v);
        }
        let r = grid_oracle_with(&program.subprogram(&key)?, opts)?;
        let v = match r.status {
            SolveStatus::EmptyDomain => (f64::INFINITY, r.optimum.x),
            _ => (r.optimum.t, r.optimum.x),
        };
        cache.insert(key, v);
        Ok(v)
    };
    let mut report = GlpReport::default();
    let mut buf = Vec::new();
    for (i, (a, b)) in pairs.iter().enumerate() {
        if a.is_empty() || !a.iter().all(|j| b.contains(j)) {
            return Err(SolveError::NotNested(i));
        }
        let (ta, xa) = value(a)?;
        let (tb, _) = value(b)?;
        report.pairs_checked += 1;
        let tol = rel_tol * ta.abs().max(tb.abs()).max(1.0);
        if ta > tb + tol {
            report.violations.push(GlpViolation { pair: i, t_subset: ta, t_superset: tb });
        }
        for &j in b.iter().filter(|j| !a.contains(j)) {
            let cj = term_cost(&program.terms[j], &xa, &mut buf);
            if cj <= ta - tol {
                report.locality_checks += 1;
                let mut aj = a.clone();
                aj.push(j);
                let (taj, _) = value(&aj)?;
                if (taj - ta).abs() > tol {
                    report.locality_violations += 1;
                }
            }
        }
    }
    Ok(report)
}
