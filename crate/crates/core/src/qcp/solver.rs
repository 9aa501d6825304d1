//! Trust-region sequential linear programming for minimax of smooth pieces.
//!
//! Each iteration linearizes every piece (central finite differences) and
//! solves `min s` subject to `f_i + g_i . d <= s`, the domain halfspaces and
//! `|d|_inf <= radius`. Steps are kept only if the true objective decreases.

use super::{
    activity_tol, CostFunction, LexValue, QuasiconvexProgram, SolveError, SolveStatus, SolverResult,
};
use crate::criteria::Quasiconvexity;
use crate::geometry::lp::{LinearProgram, LpOutcome};
use crate::geometry::{chebyshev_center, ConvexRegion, Point};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Relative tolerance on predicted decrease and on the trust radius.
    pub tol: f64,
    pub max_iter: usize,
    /// A term is active if its cost is within `max(activity_abs, activity_rel |t|)` of the optimum.
    pub activity_abs: f64,
    pub activity_rel: f64,
    /// Trust-radius factor after a rejected step.
    pub backtrack: f64,
    /// Move to the lexicographically smallest point of a flat optimal set.
    pub lex_tiebreak: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iter: 500,
            activity_abs: 1e-8,
            activity_rel: 1e-6,
            backtrack: 0.5,
            lex_tiebreak: true,
        }
    }
}

/// Solve with default options apart from `tol` and `max_iter`.
pub fn solve<C: CostFunction>(
    program: &QuasiconvexProgram<C>,
    start: Option<Point>,
    tol: f64,
    max_iter: usize,
) -> Result<SolverResult, SolveError> {
    solve_with(program, start, &SolverOptions { tol, max_iter, ..SolverOptions::default() })
}

/// Relative distance kept from the domain boundary by model steps.
const BOUNDARY_MARGIN: f64 = 1e-10;

struct Piece {
    value: f64,
    grad: [f64; 3],
}

struct Ctx<'a, C> {
    program: &'a QuasiconvexProgram<C>,
    domain: ConvexRegion,
    dim: usize,
    scale: f64,
    buf: Vec<f64>,
}

impl<'a, C: CostFunction> Ctx<'a, C> {
    fn inside(&self, x: &Point) -> bool {
        self.domain.contains(x, 1e-9 * self.scale)
    }

    fn objective(&mut self, x: &Point) -> f64 {
        if !self.inside(x) {
            return f64::INFINITY;
        }
        let mut m = f64::NEG_INFINITY;
        for t in &self.program.terms {
            m = m.max(super::term_cost(t, x, &mut self.buf));
        }
        m
    }

    /// Weighted pieces of every term at `x`, in a fixed order.
    fn values(&mut self, x: &Point, out: &mut Vec<f64>) -> bool {
        out.clear();
        for t in &self.program.terms {
            t.components(x, &mut self.buf);
            if self.buf.iter().any(|v| !v.is_finite()) {
                return false;
            }
            let w = t.weight();
            out.extend(self.buf.iter().map(|v| w * v));
        }
        true
    }

    fn pieces(&mut self, x: &Point) -> Vec<Piece> {
        let mut v0 = Vec::new();
        self.values(x, &mut v0);
        let mut pieces: Vec<Piece> = v0.iter().map(|&value| Piece { value, grad: [0.0; 3] }).collect();
        let h = 1e-7 * self.scale;
        let (mut vp, mut vm) = (Vec::new(), Vec::new());
        for k in 0..self.dim {
            let xp = x.with_coord(k, x[k] + h);
            let xm = x.with_coord(k, x[k] - h);
            let okp = self.values(&xp, &mut vp) && vp.len() == v0.len();
            let okm = self.values(&xm, &mut vm) && vm.len() == v0.len();
            for (i, p) in pieces.iter_mut().enumerate() {
                p.grad[k] = match (okp, okm) {
                    (true, true) => (vp[i] - vm[i]) / (2.0 * h),
                    (true, false) => (vp[i] - v0[i]) / h,
                    (false, true) => (v0[i] - vm[i]) / h,
                    (false, false) => 0.0,
                };
            }
        }
        pieces
    }

    fn domain_rows(&self, lp: &mut LinearProgram, x: &Point, row: &mut [f64]) {
        let d = self.dim;
        for h in &self.domain.halfspaces {
            row.iter_mut().for_each(|v| *v = 0.0);
            row[..d].copy_from_slice(&h.normal.coords()[..d]);
            // Elements degenerate on kernel faces, so steps stop just short of them.
            lp.add_le(row, (h.slack(x) / self.scale - BOUNDARY_MARGIN).max(0.0));
        }
    }

    /// Linearized minimax step inside a box of relative radius `rho`.
    /// Returns the step and the predicted objective change.
    fn model_step(&self, x: &Point, pieces: &[Piece], f: f64, rho: f64) -> Option<(Point, f64)> {
        let d = self.dim;
        let mut lp = LinearProgram::new(d + 1);
        for k in 0..d {
            lp.set_bounds(k, -rho, rho);
        }
        lp.set_cost(d, 1.0);
        let mut row = vec![0.0; d + 1];
        for p in pieces {
            for k in 0..d {
                row[k] = self.scale * p.grad[k];
            }
            row[d] = -1.0;
            lp.add_le(&row, f - p.value);
        }
        self.domain_rows(&mut lp, x, &mut row);
        match lp.minimize() {
            LpOutcome::Optimal { x: u, objective } => {
                let mut step = Point::origin(d);
                for k in 0..d {
                    step = step.with_coord(k, u[k] * self.scale);
                }
                Some((step, objective))
            }
            _ => None,
        }
    }
}

fn check_program<C: CostFunction>(program: &QuasiconvexProgram<C>) -> Result<(), SolveError> {
    for (index, t) in program.terms.iter().enumerate() {
        if t.quasiconvexity() == Quasiconvexity::No {
            return Err(SolveError::NotQuasiconvex { index, label: t.label() });
        }
    }
    Ok(())
}

pub fn solve_with<C: CostFunction>(
    program: &QuasiconvexProgram<C>,
    start: Option<Point>,
    opts: &SolverOptions,
) -> Result<SolverResult, SolveError> {
    check_program(program)?;
    let dim = program.dim();
    if let Some(s) = &start {
        if s.dim() != dim {
            return Err(SolveError::DimensionMismatch { expected: dim, got: s.dim() });
        }
    }
    let domain = program.domain.normalized();
    let Some(cheb) = chebyshev_center(&domain) else {
        return Ok(SolverResult {
            optimum: LexValue { t: f64::INFINITY, x: start.unwrap_or(Point::origin(dim)) },
            active_terms: vec![],
            iterations: 0,
            status: SolveStatus::EmptyDomain,
            trace: vec![],
        });
    };
    if cheb.radius >= 1e9 {
        return Err(SolveError::UnboundedDomain);
    }
    let scale = program.scale(start.as_ref());
    let mut ctx = Ctx { program, domain, dim, scale, buf: Vec::with_capacity(8) };
    let mut x = match start {
        Some(s) if !ctx.inside(&s) => return Err(SolveError::StartOutsideDomain(s)),
        Some(s) => s,
        None => cheb.center,
    };
    let mut f = ctx.objective(&x);
    if !f.is_finite() {
        x = cheb.center;
        f = ctx.objective(&x);
    }
    let mut trace = vec![f];
    let mut iterations = 0;
    let mut status = SolveStatus::Converged;
    if f.is_finite() {
        let out = slp(&mut ctx, x, f, 0.1 * scale, opts, |c, p| c.objective(p), |c, p| c.pieces(p));
        x = out.x;
        f = out.f;
        iterations = out.iterations;
        status = out.status;
        trace.extend(out.trace);
    }
    if opts.lex_tiebreak && f.is_finite() {
        x = lex_polish(&mut ctx, x, f, opts);
    }
    let delta = activity_tol(f, opts.activity_abs, opts.activity_rel);
    Ok(SolverResult {
        optimum: LexValue { t: f, x },
        active_terms: program.active_terms(&x, f, delta),
        iterations,
        status,
        trace,
    })
}

struct SlpOutcome {
    x: Point,
    f: f64,
    iterations: usize,
    status: SolveStatus,
    trace: Vec<f64>,
}

/// Trust-region SLP on `eval`, the maximum of the smooth pieces from `model`.
fn slp<C: CostFunction>(
    ctx: &mut Ctx<'_, C>,
    mut x: Point,
    mut f: f64,
    mut radius: f64,
    opts: &SolverOptions,
    mut eval: impl FnMut(&mut Ctx<'_, C>, &Point) -> f64,
    mut model: impl FnMut(&mut Ctx<'_, C>, &Point) -> Vec<Piece>,
) -> SlpOutcome {
    let scale = ctx.scale;
    let max_radius = 0.5 * scale;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut status = SolveStatus::IterationCap;
    while iterations < opts.max_iter {
        iterations += 1;
        let pieces = model(ctx, &x);
        let Some((step, m)) = ctx.model_step(&x, &pieces, f, radius / scale) else {
            status = SolveStatus::Converged;
            break;
        };
        let predicted = -m;
        if predicted <= opts.tol * f.abs().max(1.0) {
            status = SolveStatus::Converged;
            break;
        }
        let xn = x + step;
        let fn_ = eval(ctx, &xn);
        if fn_ < f {
            let ratio = (f - fn_) / predicted;
            x = xn;
            f = fn_;
            trace.push(f);
            let at_edge = step.max_abs() >= 0.99 * radius;
            if ratio < 0.25 {
                radius *= opts.backtrack;
            } else if ratio > 0.75 && at_edge {
                radius = (2.0 * radius).min(max_radius);
            }
        } else {
            radius *= opts.backtrack;
        }
        if radius < opts.tol * scale {
            status = SolveStatus::Converged;
            break;
        }
    }
    SlpOutcome { x, f, iterations, status, trace }
}

/// Whether some point with objective at most `t` lies beyond `x` in the
/// direction of decreasing coordinate `k` (a flat optimal set).
fn has_flat_direction<C: CostFunction>(ctx: &mut Ctx<'_, C>, x: &Point, t: f64, k: usize) -> bool {
    let d = ctx.dim;
    let scale = ctx.scale;
    let rho = 1e-3;
    let pieces = ctx.pieces(x);
    let mut lp = LinearProgram::new(d + 1);
    for j in 0..d {
        lp.set_bounds(j, -rho, rho);
    }
    for j in 0..k {
        lp.set_bounds(j, -rho, 0.0);
    }
    lp.set_bounds(d, f64::NEG_INFINITY, 0.0);
    lp.set_cost(d, 1.0);
    let mut row = vec![0.0; d + 1];
    row[k] = 1.0;
    row[d] = -1.0;
    lp.add_le(&row, 0.0);
    for p in &pieces {
        let g: Vec<f64> = (0..d).map(|j| scale * p.grad[j]).collect();
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        row[..d].copy_from_slice(&g);
        if t - p.value <= gn * rho {
            // Near-active pieces must strictly decrease.
            row[d] = -gn;
            lp.add_le(&row, 0.0);
        } else {
            row[d] = 0.0;
            lp.add_le(&row, t - p.value);
        }
    }
    ctx.domain_rows(&mut lp, x, &mut row);
    let LpOutcome::Optimal { x: u, objective } = lp.minimize() else { return false };
    if objective > -1e-9 * rho {
        return false;
    }
    let mut step = Point::origin(d);
    for j in 0..d {
        step = step.with_coord(j, u[j] * scale);
    }
    let mut alpha = 1.0;
    while alpha > 1e-3 {
        let xn = *x + step * alpha;
        if xn[k] < x[k] - 1e-7 * scale && ctx.objective(&xn) <= t {
            return true;
        }
        alpha *= 0.5;
    }
    false
}

/// Move to the lexicographically smallest point with objective at most `t`
/// when the optimal set is not a single point. Each coordinate is minimized
/// with the exact penalty `x_k + mu max(0, F - t)`, itself a max of pieces.
fn lex_polish<C: CostFunction>(ctx: &mut Ctx<'_, C>, x0: Point, t: f64, opts: &SolverOptions) -> Point {
    let d = ctx.dim;
    let scale = ctx.scale;
    let mut x = x0;
    for k in 0..d {
        if !has_flat_direction(ctx, &x, t, k) {
            continue;
        }
        let pieces = ctx.pieces(&x);
        let gmin = pieces
            .iter()
            .map(|p| p.grad[..d].iter().map(|v| v * v).sum::<f64>().sqrt() * scale)
            .filter(|g| *g > 1e-9 * scale)
            .fold(f64::INFINITY, f64::min);
        let mu = if gmin.is_finite() { 10.0 * scale / gmin } else { 1.0 };
        let fixed: Vec<f64> = (0..k).map(|j| x[j]).collect();
        let penalty = |c: &mut Ctx<'_, C>, p: &Point| {
            let mut v = p[k] + mu * (c.objective(p) - t).max(0.0);
            // Earlier coordinates are already minimal; do not let them grow.
            for (j, &fj) in fixed.iter().enumerate() {
                v += mu * (p[j] - fj).max(0.0);
            }
            v
        };
        let model = |c: &mut Ctx<'_, C>, p: &Point| {
            let base = c.pieces(p);
            let mut out: Vec<Piece> = Vec::with_capacity(base.len() + 1);
            let mut ek = [0.0; 3];
            ek[k] = 1.0;
            out.push(Piece { value: p[k], grad: ek });
            for b in &base {
                let mut g = [0.0; 3];
                for j in 0..d {
                    g[j] = ek[j] + mu * b.grad[j];
                }
                out.push(Piece { value: p[k] + mu * (b.value - t), grad: g });
            }
            for (j, &fj) in fixed.iter().enumerate() {
                let mut g = ek;
                g[j] += mu;
                out.push(Piece { value: p[k] + mu * (p[j] - fj), grad: g });
            }
            out
        };
        let f0 = penalty(ctx, &x);
        let sub = SolverOptions { tol: opts.tol, max_iter: opts.max_iter, ..*opts };
        let out = slp(ctx, x, f0, 0.05 * scale, &sub, penalty, model);
        // Pull back onto the sublevel set along the segment from the last feasible point.
        let mut cand = out.x;
        if ctx.objective(&cand) > t {
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if ctx.objective(&x.lerp(&out.x, mid)) <= t {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            cand = x.lerp(&out.x, lo);
        }
        let earlier_ok = (0..k).all(|j| cand[j] <= x[j]);
        if cand[k] < x[k] && earlier_ok && ctx.objective(&cand) <= t {
            x = cand;
        }
    }
    x
}
