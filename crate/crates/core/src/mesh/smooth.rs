use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::criteria::{Criterion, CriterionKind};
use crate::geometry::Point;
use crate::qcp::{solve, term_cost, OracleOptions, SolveStatus};
use crate::special::{is_circle_line_kind, minmax_place, nonconvex_grid_place, SpecialError};

use super::patch::patch_with_incidence;
use super::report::{mesh_objective, worst_quality};
use super::{element_defect, validate, Mesh, MeshError, Patch};

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothConfig {
    pub criteria: Vec<Criterion>,
    /// Maximum number of sweeps over the movable vertices.
    pub passes: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// Zero visits vertices in index order; anything else shuffles the
    /// order once with this seed.
    pub seed: u64,
}

impl SmoothConfig {
    pub fn new(criteria: Vec<Criterion>) -> Self {
        SmoothConfig { criteria, passes: 5, tol: 1e-10, max_iter: 500, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementMethod {
    Quasiconvex,
    CandidateSearch,
    GridSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Placement {
    pub point: Point,
    pub objective: f64,
    pub method: PlacementMethod,
    pub status: SolveStatus,
    pub iterations: usize,
}

fn classify(criteria: &[Criterion]) -> Result<PlacementMethod, MeshError> {
    let list = || criteria.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    if criteria.is_empty() {
        return Err(MeshError::Criterion(crate::criteria::CriterionError::NoTerms));
    }
    let qc = criteria.iter().filter(|c| c.kind.is_quasiconvex()).count();
    if qc == criteria.len() {
        Ok(PlacementMethod::Quasiconvex)
    } else if qc > 0 {
        Err(MeshError::MixedConvexity(list()))
    } else if criteria.iter().all(|c| is_circle_line_kind(c.kind)) {
        Ok(PlacementMethod::CandidateSearch)
    } else {
        Ok(PlacementMethod::GridSearch)
    }
}

/// Best position for the free vertex of `patch` under a criteria mixture.
///
/// Quasiconvex mixtures go to the descent solver, max-angle and
/// circumradius to the candidate search, and anything else non-quasiconvex
/// (max-min perimeter) to a grid search. Mixing quasiconvex and
/// non-quasiconvex kinds is refused.
pub fn optimal_placement(patch: &Patch, criteria: &[Criterion], tol: f64, max_iter: usize) -> Result<Placement, MeshError> {
    let method = classify(criteria)?;
    // Fails early if a criterion fits none of the elements.
    patch.terms(criteria)?;
    match method {
        PlacementMethod::Quasiconvex => {
            let prog = patch.program(criteria)?;
            let start = (patch.domain.contains(&patch.position, 0.0) && prog.cost(&patch.position).is_finite())
                .then_some(patch.position);
            let r = solve(&prog, start, tol, max_iter)?;
            Ok(Placement {
                point: r.optimum.x,
                objective: r.optimum.t,
                method,
                status: r.status,
                iterations: r.iterations,
            })
        }
        PlacementMethod::CandidateSearch => match minmax_place(patch, criteria, tol.max(1e-12)) {
            Ok(r) => Ok(Placement {
                point: r.point,
                objective: r.objective,
                method,
                status: SolveStatus::Converged,
                iterations: r.iterations,
            }),
            Err(SpecialError::EmptyKernel) => Ok(empty_placement(patch, method)),
            Err(e) => Err(e.into()),
        },
        PlacementMethod::GridSearch => {
            match nonconvex_grid_place(patch, criteria, &OracleOptions { levels: 6, ..OracleOptions::default() }) {
                Ok(r) => Ok(Placement {
                    point: r.optimum.x,
                    objective: r.optimum.t,
                    method,
                    status: r.status,
                    iterations: r.iterations,
                }),
                Err(SpecialError::EmptyKernel) => Ok(empty_placement(patch, method)),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn empty_placement(patch: &Patch, method: PlacementMethod) -> Placement {
    Placement {
        point: patch.position,
        objective: f64::INFINITY,
        method,
        status: SolveStatus::EmptyDomain,
        iterations: 0,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothOutcome {
    pub vertex: usize,
    pub moved: bool,
    pub old_cost: f64,
    pub new_cost: f64,
    /// Position after the call.
    pub position: Point,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// Move vertex `v` to its optimal placement if that strictly improves the
/// patch cost and keeps every incident element valid.
pub fn smooth_vertex(mesh: &mut Mesh, v: usize, config: &SmoothConfig) -> Result<SmoothOutcome, MeshError> {
    if v >= mesh.vertices.len() {
        return Err(MeshError::VertexOutOfRange(v));
    }
    let inc = mesh.incidence();
    smooth_with_incidence(mesh, v, &inc[v], config)
}

fn smooth_with_incidence(
    mesh: &mut Mesh,
    v: usize,
    incident: &[usize],
    config: &SmoothConfig,
) -> Result<SmoothOutcome, MeshError> {
    if mesh.fixed[v] {
        return Err(MeshError::NotSmoothable { vertex: v, reason: "vertex is fixed".into() });
    }
    let patch = patch_with_incidence(mesh, v, incident)?;
    let terms = patch.terms(&config.criteria)?;
    let mut buf = Vec::new();
    let mut cost = |x: &Point| terms.iter().map(|t| term_cost(t, x, &mut buf)).fold(f64::NEG_INFINITY, f64::max);
    let old = cost(&patch.position);
    let placement = optimal_placement(&patch, &config.criteria, config.tol, config.max_iter)?;
    let mut out = SmoothOutcome {
        vertex: v,
        moved: false,
        old_cost: old,
        new_cost: old,
        position: patch.position,
        diagnostic: None,
    };
    if placement.status == SolveStatus::EmptyDomain {
        out.diagnostic = Some("empty kernel; vertex skipped".into());
        return Ok(out);
    }
    let new = cost(&placement.point);
    let margin = 1e-12f64.max(1e-9 * old.abs());
    if !(new < old - margin) {
        return Ok(out);
    }
    let valid = incident.iter().all(|&e| {
        let pts: Vec<Point> = mesh.elements[e]
            .nodes
            .iter()
            .map(|&i| if i == v { placement.point } else { mesh.vertices[i] })
            .collect();
        element_defect(mesh.elements[e].kind, &pts).is_none()
    });
    if !valid {
        out.diagnostic = Some("optimal placement would invalidate an element".into());
        return Ok(out);
    }
    mesh.vertices[v] = placement.point;
    out.moved = true;
    out.new_cost = new;
    out.position = placement.point;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorstQuality {
    pub criterion: String,
    /// Smallest quality for maximize-min criteria, largest otherwise, in
    /// natural units.
    pub before: Option<f64>,
    pub after: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PassStats {
    pub pass: usize,
    pub moves_accepted: usize,
    /// Largest weighted element cost over the whole mesh after the pass.
    pub objective: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedVertex {
    pub vertex: usize,
    pub pass: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepStats {
    pub vertices_visited: usize,
    pub moves_accepted: usize,
    pub passes_run: usize,
    /// Largest weighted element cost before the first pass.
    pub initial_objective: f64,
    pub worst_quality: Vec<WorstQuality>,
    pub passes: Vec<PassStats>,
    pub skipped: Vec<SkippedVertex>,
}

fn visit_order(mesh: &Mesh, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = mesh.movable().collect();
    if seed != 0 {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    order
}

fn check_valid(mesh: &Mesh) -> Result<(), MeshError> {
    let report = validate(mesh);
    if report.is_valid() {
        Ok(())
    } else {
        Err(MeshError::Invalid(report))
    }
}

/// Gauss-Seidel sweeps of optimization-based smoothing.
pub fn sweep(mesh: &mut Mesh, config: &SmoothConfig) -> Result<SweepStats, MeshError> {
    sweep_observed(mesh, config, &mut |_, _| {})
}

/// [`sweep`], calling `observer` after every accepted move.
pub fn sweep_observed(
    mesh: &mut Mesh,
    config: &SmoothConfig,
    observer: &mut dyn FnMut(&Mesh, &SmoothOutcome),
) -> Result<SweepStats, MeshError> {
    classify(&config.criteria)?;
    check_valid(mesh)?;
    let before: Vec<Option<f64>> = config.criteria.iter().map(|c| worst_quality(mesh, c)).collect();
    let initial_objective = mesh_objective(mesh, &config.criteria);
    let inc = mesh.incidence();
    let order = visit_order(mesh, config.seed);
    let mut stats = SweepStats {
        vertices_visited: 0,
        moves_accepted: 0,
        passes_run: 0,
        initial_objective,
        worst_quality: Vec::new(),
        passes: Vec::new(),
        skipped: Vec::new(),
    };
    for pass in 0..config.passes {
        let mut moves = 0;
        for &v in &order {
            stats.vertices_visited += 1;
            let out = smooth_with_incidence(mesh, v, &inc[v], config)?;
            if out.moved {
                moves += 1;
                observer(mesh, &out);
            } else if let Some(reason) = out.diagnostic {
                stats.skipped.push(SkippedVertex { vertex: v, pass, reason });
            }
        }
        stats.moves_accepted += moves;
        stats.passes_run += 1;
        stats.passes.push(PassStats {
            pass,
            moves_accepted: moves,
            objective: mesh_objective(mesh, &config.criteria),
        });
        if moves == 0 {
            break;
        }
    }
    stats.worst_quality = config
        .criteria
        .iter()
        .zip(before)
        .map(|(c, b)| WorstQuality { criterion: c.to_string(), before: b, after: worst_quality(mesh, c) })
        .collect();
    Ok(stats)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianConfig {
    pub passes: usize,
    /// Reject moves that would invalidate an incident element.
    pub guarded: bool,
    /// Criteria reported in the statistics.
    pub criteria: Vec<Criterion>,
}

impl Default for LaplacianConfig {
    fn default() -> Self {
        LaplacianConfig { passes: 5, guarded: true, criteria: vec![Criterion::new(CriterionKind::MinAngle)] }
    }
}

/// Move each movable vertex to the centroid of its edge neighbours.
pub fn laplacian_smooth(mesh: &mut Mesh, config: &LaplacianConfig) -> Result<SweepStats, MeshError> {
    check_valid(mesh)?;
    let before: Vec<Option<f64>> = config.criteria.iter().map(|c| worst_quality(mesh, c)).collect();
    let initial_objective = mesh_objective(mesh, &config.criteria);
    let inc = mesh.incidence();
    let order: Vec<usize> = mesh.movable().collect();
    let neighbors: Vec<Vec<usize>> = (0..mesh.len()).map(|v| mesh.edge_neighbors(v, &inc[v])).collect();
    let mut stats = SweepStats {
        vertices_visited: 0,
        moves_accepted: 0,
        passes_run: 0,
        initial_objective,
        worst_quality: Vec::new(),
        passes: Vec::new(),
        skipped: Vec::new(),
    };
    for pass in 0..config.passes {
        let mut moves = 0;
        for &v in &order {
            stats.vertices_visited += 1;
            let nb = &neighbors[v];
            if nb.is_empty() {
                continue;
            }
            let c = nb.iter().fold(Point::origin(mesh.dim), |a, &i| a + mesh.vertices[i]) / nb.len() as f64;
            let local = nb.iter().map(|&i| mesh.vertices[i].distance(&mesh.vertices[v])).fold(0.0, f64::max);
            if c.distance(&mesh.vertices[v]) <= 1e-12 * local {
                continue;
            }
            if config.guarded {
                let ok = inc[v].iter().all(|&e| {
                    let pts: Vec<Point> = mesh.elements[e]
                        .nodes
                        .iter()
                        .map(|&i| if i == v { c } else { mesh.vertices[i] })
                        .collect();
                    element_defect(mesh.elements[e].kind, &pts).is_none()
                });
                if !ok {
                    stats.skipped.push(SkippedVertex { vertex: v, pass, reason: "centroid would invalidate an element".into() });
                    continue;
                }
            }
            mesh.vertices[v] = c;
            moves += 1;
        }
        stats.moves_accepted += moves;
        stats.passes_run += 1;
        stats.passes.push(PassStats {
            pass,
            moves_accepted: moves,
            objective: mesh_objective(mesh, &config.criteria),
        });
        if moves == 0 {
            break;
        }
    }
    stats.worst_quality = config
        .criteria
        .iter()
        .zip(before)
        .map(|(c, b)| WorstQuality { criterion: c.to_string(), before: b, after: worst_quality(mesh, c) })
        .collect();
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Element;
    use std::f64::consts::PI;

    fn fan(center: Point) -> Mesh {
        let mut v = vec![
            Point::new2(-1.0, -1.0),
            Point::new2(1.0, -1.0),
            Point::new2(1.0, 1.0),
            Point::new2(-1.0, 1.0),
        ];
        v.push(center);
        let e = (0..4).map(|k| Element::triangle(4, k, (k + 1) % 4)).collect();
        Mesh::new(2, v, vec![true, true, true, true, false], e).unwrap()
    }

    #[test]
    fn square_min_angle_moves_to_centre() {
        let mut m = fan(Point::new2(0.3, 0.2));
        let cfg = SmoothConfig::new(vec![Criterion::new(CriterionKind::MinAngle)]);
        let out = smooth_vertex(&mut m, 4, &cfg).unwrap();
        assert!(out.moved);
        assert!(m.vertices[4].norm() < 1e-6, "{:?}", m.vertices[4]);
        assert!((out.new_cost + PI / 4.0).abs() < 1e-9);
        let again = smooth_vertex(&mut m, 4, &cfg).unwrap();
        assert!(!again.moved);
    }

    #[test]
    fn mixed_convexity_is_refused() {
        let mut m = fan(Point::new2(0.3, 0.2));
        let cfg = SmoothConfig::new(vec![
            Criterion::new(CriterionKind::MaxAngle),
            Criterion::new(CriterionKind::MinAngle),
        ]);
        let err = smooth_vertex(&mut m, 4, &cfg).unwrap_err();
        assert!(matches!(err, MeshError::MixedConvexity(_)));
        assert!(err.is_usage());
    }

    #[test]
    fn max_angle_routes_to_candidates() {
        let mut m = fan(Point::new2(0.3, 0.2));
        let cfg = SmoothConfig::new(vec![Criterion::new(CriterionKind::MaxAngle)]);
        let out = smooth_vertex(&mut m, 4, &cfg).unwrap();
        assert!(out.moved);
        assert!((out.new_cost - PI / 2.0).abs() < 1e-8);
    }

    #[test]
    fn laplacian_centroid() {
        let mut m = fan(Point::new2(0.3, 0.2));
        let stats = laplacian_smooth(&mut m, &LaplacianConfig::default()).unwrap();
        assert!(m.vertices[4].norm() < 1e-15);
        assert_eq!(stats.moves_accepted, 1);
    }

    #[test]
    fn sweep_on_optimal_mesh_is_idle() {
        let mut m = fan(Point::new2(0.0, 0.0));
        let stats = sweep(&mut m, &SmoothConfig::new(vec![Criterion::new(CriterionKind::MinAngle)])).unwrap();
        assert_eq!(stats.moves_accepted, 0);
        assert_eq!(stats.passes_run, 1);
    }
}
