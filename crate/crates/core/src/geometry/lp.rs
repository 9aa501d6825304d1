//! Thin wrapper over `minilp` for the small dense programs used here.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
    /// The simplex backend hit a numerically singular basis.
    Failed,
}

/// Minimize `cost . x` subject to `row . x <= rhs` and variable bounds.
#[derive(Clone, Debug)]
pub(crate) struct LinearProgram {
    cost: Vec<f64>,
    bounds: Vec<(f64, f64)>,
    rows: Vec<(Vec<f64>, f64)>,
}

impl LinearProgram {
    pub fn new(nvars: usize) -> Self {
        LinearProgram {
            cost: vec![0.0; nvars],
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY); nvars],
            rows: Vec::new(),
        }
    }

    pub fn set_cost(&mut self, i: usize, c: f64) {
        self.cost[i] = c;
    }

    pub fn set_bounds(&mut self, i: usize, lo: f64, hi: f64) {
        self.bounds[i] = (lo, hi);
    }

    pub fn add_le(&mut self, row: &[f64], rhs: f64) {
        debug_assert_eq!(row.len(), self.cost.len());
        self.rows.push((row.to_vec(), rhs));
    }

    pub fn minimize(&self) -> LpOutcome {
        let mut p = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<_> = self
            .cost
            .iter()
            .zip(&self.bounds)
            .map(|(&c, &b)| p.add_var(c, b))
            .collect();
        // Rescale so that the largest coefficient is 1, and keep only the
        // tightest of rows with identical coefficients: repeated rows make
        // the simplex basis singular.
        let mut scaled: Vec<(Vec<f64>, f64)> = Vec::with_capacity(self.rows.len());
        for (row, rhs) in &self.rows {
            let m = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if m == 0.0 {
                if *rhs < -1e-12 {
                    return LpOutcome::Infeasible;
                }
                continue;
            }
            let r: Vec<f64> = row.iter().map(|c| c / m).collect();
            let b = rhs / m;
            match scaled.iter_mut().find(|(q, _)| q.iter().zip(&r).all(|(a, c)| (a - c).abs() <= 1e-12)) {
                Some(prev) => prev.1 = prev.1.min(b),
                None => scaled.push((r, b)),
            }
        }
        let mut terms = Vec::with_capacity(vars.len());
        for (row, rhs) in &scaled {
            terms.clear();
            terms.extend(row.iter().zip(&vars).filter(|(c, _)| **c != 0.0).map(|(c, v)| (*v, *c)));
            p.add_constraint(terms.as_slice(), ComparisonOp::Le, *rhs);
        }
        // minilp unwraps a singular factorization internally.
        quiet_backend_panics();
        let solved = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| p.solve()));
        let Ok(solved) = solved else { return LpOutcome::Failed };
        match solved {
            Ok(sol) => {
                let x: Vec<f64> = vars.iter().map(|v| sol[*v]).collect();
                // minilp can report an unbounded ray as an infinite optimum.
                if !sol.objective().is_finite() || x.iter().any(|v| !v.is_finite()) {
                    return LpOutcome::Unbounded;
                }
                LpOutcome::Optimal { x, objective: sol.objective() }
            }
            Err(minilp::Error::Infeasible) => LpOutcome::Infeasible,
            Err(minilp::Error::Unbounded) => LpOutcome::Unbounded,
        }
    }
}

/// Keep the caught backend panics out of stderr; other panics still print.
fn quiet_backend_panics() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| {
        let previous = std::panic::take_hook();
        std::panic::set_hook(Box::new(move |info| {
            let from_backend = info.location().is_some_and(|l| l.file().contains("minilp"));
            if !from_backend {
                previous(info);
            }
        }));
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_program() {
        // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0
        let mut lp = LinearProgram::new(2);
        lp.set_cost(0, -1.0);
        lp.set_cost(1, -1.0);
        lp.set_bounds(0, 0.0, f64::INFINITY);
        lp.set_bounds(1, 0.0, f64::INFINITY);
        lp.add_le(&[1.0, 2.0], 4.0);
        lp.add_le(&[3.0, 1.0], 6.0);
        match lp.minimize() {
            LpOutcome::Optimal { x, objective } => {
                assert!((x[0] - 1.6).abs() < 1e-9 && (x[1] - 1.2).abs() < 1e-9);
                assert!((objective + 2.8).abs() < 1e-9);
            }
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add_le(&[1.0], 0.0);
        lp.add_le(&[-1.0], -1.0);
        assert_eq!(lp.minimize(), LpOutcome::Infeasible);
        let mut lp = LinearProgram::new(1);
        lp.set_cost(0, -1.0);
        lp.add_le(&[-1.0], 0.0);
        assert_eq!(lp.minimize(), LpOutcome::Unbounded);
    }
}
