//! Random and hand-made patches and meshes for tests, examples and
//! benchmarks. All generators are deterministic given the RNG state.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::criteria::ElementStencil;
use crate::geometry::{orient2, orient3, solid_angle, Point};
use crate::mesh::{element_defect, Element, Mesh, MeshError, Patch};

/// The square with corners (+-1, +-1) around a free vertex at `position`.
pub fn square_patch(position: Point) -> Patch {
    let poly = [
        Point::new2(-1.0, -1.0),
        Point::new2(1.0, -1.0),
        Point::new2(1.0, 1.0),
        Point::new2(-1.0, 1.0),
    ];
    Patch::from_star_polygon(position, &poly).expect("square is a valid star")
}

/// Increasing angles around the circle with gaps in `[lo, hi]` times the
/// mean gap, starting at a random phase.
fn random_angles<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let gaps: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
    let total: f64 = gaps.iter().sum();
    let mut a = rng.gen_range(0.0..2.0 * PI);
    gaps.iter()
        .map(|g| {
            let cur = a;
            a += g / total * 2.0 * PI;
            cur
        })
        .collect()
}

/// A counterclockwise polygon with `n` vertices, star-shaped about the
/// origin: angular gaps in [0.3, 1.7] times the mean and radii in [0.6, 1.4].
pub fn random_star_polygon<R: Rng>(rng: &mut R, n: usize) -> Vec<Point> {
    random_angles(rng, n, 0.3, 1.7)
        .into_iter()
        .map(|a| Point::new2(a.cos(), a.sin()) * rng.gen_range(0.6..1.4))
        .collect()
}

/// A random triangle patch with 5 to 12 boundary vertices. The free vertex
/// starts near the origin, inside the kernel.
pub fn random_star_patch<R: Rng>(rng: &mut R) -> Patch {
    let n = rng.gen_range(5..=12);
    let poly = random_star_polygon(rng, n);
    let mut patch = Patch::from_star_polygon(Point::origin(2), &poly).expect("random star is valid");
    let offset = Point::new2(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1));
    if patch.domain.min_slack(&offset) > 0.0 {
        patch.position = offset;
    }
    patch
}

/// A random patch of 3 to 6 convex quadrilaterals around the origin.
/// Returns the patch and its boundary (edge neighbour, corner, ...).
pub fn random_quad_patch<R: Rng>(rng: &mut R) -> (Patch, Vec<Point>) {
    loop {
        let k = rng.gen_range(3..=6);
        let edges: Vec<Point> = random_angles(rng, k, 0.6, 1.4)
            .into_iter()
            .map(|a| Point::new2(a.cos(), a.sin()) * rng.gen_range(0.7..1.3))
            .collect();
        let mut boundary = Vec::with_capacity(2 * k);
        let mut stencils = Vec::with_capacity(k);
        let mut ok = true;
        for i in 0..k {
            let (e0, e1) = (edges[i], edges[(i + 1) % k]);
            let d = e1 - e0;
            let outward = Point::new2(d.y(), -d.x());
            let corner = e0.midpoint(&e1) + outward * rng.gen_range(0.2..0.6) + d * rng.gen_range(-0.15..0.15);
            let quad = [Point::origin(2), e0, corner, e1];
            ok &= element_defect(crate::criteria::ElementKind::Quad, &quad).is_none();
            boundary.extend([e0, corner]);
            match ElementStencil::quad(e0, corner, e1) {
                Ok(s) => stencils.push(s),
                Err(_) => ok = false,
            }
        }
        if ok {
            let patch = Patch::from_stencils(Point::origin(2), stencils).expect("valid quad star");
            return (patch, boundary);
        }
    }
}

/// Faces of the convex hull of `dirs`. Brute force; meant for a few dozen points.
fn hull_faces(dirs: &[Point]) -> Vec<[usize; 3]> {
    let n = dirs.len();
    let mut faces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (dirs[i], dirs[j], dirs[k]);
                let s: Vec<f64> = (0..n)
                    .filter(|&m| m != i && m != j && m != k)
                    .map(|m| orient3(&a, &b, &c, &dirs[m]))
                    .collect();
                let tol = 1e-12;
                if s.iter().all(|&v| v <= tol) {
                    faces.push([i, k, j]);
                } else if s.iter().all(|&v| v >= -tol) {
                    faces.push([i, j, k]);
                }
            }
        }
    }
    faces
}

/// Tetrahedra joining `center` to the hull faces of `points` taken as
/// directions from the centre, with the points at their given positions.
pub fn tet_star(center: Point, points: &[Point]) -> Result<Patch, MeshError> {
    let dirs: Vec<Point> = points.iter().map(|p| (*p - center).normalized().unwrap_or(*p)).collect();
    tet_star_from_faces(center, points, &hull_faces(&dirs))
}

fn octahedron() -> Vec<Point> {
    let mut v = Vec::new();
    for k in 0..3 {
        for s in [1.0, -1.0] {
            v.push(Point::axis(3, k) * s);
        }
    }
    v
}

fn icosahedron() -> Vec<Point> {
    let phi = 0.5 * (1.0 + 5f64.sqrt());
    let mut v = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            v.push(Point::new3(0.0, s1, s2 * phi));
            v.push(Point::new3(s1, s2 * phi, 0.0));
            v.push(Point::new3(s2 * phi, 0.0, s1));
        }
    }
    v.into_iter().map(|p| p / p.norm()).collect()
}

/// A random tetrahedral star around the origin: a perturbed octahedron or
/// icosahedron with radii in [0.7, 1.3], so the star is usually not convex.
pub fn random_tet_patch<R: Rng>(rng: &mut R) -> Patch {
    loop {
        let base = if rng.gen_bool(0.5) { octahedron() } else { icosahedron() };
        let dirs: Vec<Point> = base
            .iter()
            .map(|d| {
                let j = Point::new3(rng.gen_range(-0.15..0.15), rng.gen_range(-0.15..0.15), rng.gen_range(-0.15..0.15));
                (*d + j).normalized().expect("perturbation is small")
            })
            .collect();
        let faces = hull_faces(&dirs);
        let pts: Vec<Point> = dirs.iter().map(|d| *d * rng.gen_range(0.7..1.3)).collect();
        let mut stencils = Vec::new();
        let mut ok = true;
        for f in faces {
            let [a, b, c] = f.map(|i| pts[i]);
            let (b, c) = if orient3(&Point::origin(3), &a, &b, &c) > 0.0 { (b, c) } else { (c, b) };
            let lmax = a.distance(&b).max(b.distance(&c)).max(c.distance(&a));
            ok &= orient3(&Point::origin(3), &a, &b, &c) > 1e-3 * lmax.powi(3);
            match ElementStencil::tet(a, b, c) {
                Ok(s) => stencils.push(s),
                Err(_) => ok = false,
            }
        }
        if ok {
            return Patch::from_stencils(Point::origin(3), stencils).expect("valid tet star");
        }
    }
}

/// A structured triangulation of `[0, n]^2` with unit spacing and every
/// square cut along the same diagonal. Boundary vertices are fixed.
pub fn grid_mesh(n: usize) -> Mesh {
    let m = n + 1;
    let mut v = Vec::with_capacity(m * m);
    let mut fixed = Vec::with_capacity(m * m);
    for j in 0..m {
        for i in 0..m {
            v.push(Point::new2(i as f64, j as f64));
            fixed.push(i == 0 || j == 0 || i == n || j == n);
        }
    }
    let mut e = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let a = j * m + i;
            let (b, c, d) = (a + 1, a + m + 1, a + m);
            e.push(Element::triangle(a, b, c));
            e.push(Element::triangle(a, c, d));
        }
    }
    Mesh::new(2, v, fixed, e).expect("grid is well formed")
}

/// [`grid_mesh`] with each interior vertex moved by independent uniform
/// noise in `[-amplitude, amplitude]` per coordinate (in units of the
/// spacing). A displacement that would invert an element is redrawn.
pub fn perturbed_grid(n: usize, amplitude: f64, seed: u64) -> Mesh {
    let mut mesh = grid_mesh(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inc = mesh.incidence();
    for v in 0..mesh.len() {
        if mesh.fixed[v] {
            continue;
        }
        let base = mesh.vertices[v];
        for _ in 0..1000 {
            let p = base + Point::new2(rng.gen_range(-amplitude..=amplitude), rng.gen_range(-amplitude..=amplitude));
            mesh.vertices[v] = p;
            let ok = inc[v].iter().all(|&e| element_defect(mesh.elements[e].kind, &mesh.element_points(e)).is_none());
            if ok {
                break;
            }
            mesh.vertices[v] = base;
        }
    }
    mesh
}

/// A tetrahedral patch whose free vertex starts as a corner of a slightly
/// perturbed square, nearly coplanar with the opposite face, so the
/// tetrahedron on that face is a sliver.
#[derive(Clone, Debug)]
pub struct SliverFixture {
    pub patch: Patch,
    /// Smallest solid angle at the free vertex over the star, at the start.
    pub baseline_min_solid_angle: f64,
    pub perturbation: f64,
}

/// Smallest solid angle subtended at `x` by the faces of a tetrahedral patch.
pub fn min_solid_angle_at(patch: &Patch, x: &Point) -> f64 {
    patch
        .stencils
        .iter()
        .map(|s| solid_angle(x, &s.fixed[0], &s.fixed[1], &s.fixed[2]).unwrap_or(0.0))
        .fold(f64::INFINITY, f64::min)
}

pub fn sliver_fixture(eps: f64) -> SliverFixture {
    // Square corners lifted alternately by +-eps; the free vertex is the
    // fourth corner and the other three form the sliver face.
    let x = Point::new3(0.0, -1.0, -eps);
    let pts = [
        Point::new3(1.0, 0.0, eps),
        Point::new3(0.0, 1.0, -eps),
        Point::new3(-1.0, 0.0, eps),
        Point::new3(0.0, -2.0, 0.8),
        Point::new3(-1.6, -1.6, -0.6),
        Point::new3(1.6, -1.6, -0.6),
        Point::new3(0.0, 0.2, -1.5),
    ];
    let (s1, s2, s3, n, l, r, d) = (0, 1, 2, 3, 4, 5, 6);
    let faces = [
        [s1, s2, s3],
        [s1, s3, n],
        [s3, l, n],
        [s1, n, r],
        [n, l, r],
        [l, d, r],
        [s1, r, d],
        [s3, d, l],
        [s1, d, s2],
        [s2, d, s3],
    ];
    let patch = tet_star_from_faces(x, &pts, &faces).expect("sliver star is visible from the free vertex");
    let baseline = min_solid_angle_at(&patch, &x);
    SliverFixture { patch, baseline_min_solid_angle: baseline, perturbation: eps }
}

/// Tetrahedra joining `center` to the given triangular faces. Each face is
/// oriented to make its tetrahedron positive; the faces must then form a
/// closed, consistently oriented surface.
pub fn tet_star_from_faces(center: Point, points: &[Point], faces: &[[usize; 3]]) -> Result<Patch, MeshError> {
    let mut oriented = Vec::with_capacity(faces.len());
    for f in faces {
        let [a, b, c] = *f;
        let o = orient3(&center, &points[a], &points[b], &points[c]);
        if o == 0.0 {
            return Err(MeshError::Malformed("face is coplanar with the centre".into()));
        }
        oriented.push(if o > 0.0 { [a, b, c] } else { [a, c, b] });
    }
    let mut edges = std::collections::HashMap::new();
    for f in &oriented {
        for k in 0..3 {
            *edges.entry((f[k], f[(k + 1) % 3])).or_insert(0) += 1;
        }
    }
    if edges.iter().any(|(&(a, b), &c)| c != 1 || edges.get(&(b, a)) != Some(&1)) {
        return Err(MeshError::Malformed("faces do not form a star around the centre".into()));
    }
    let stencils = oriented
        .iter()
        .map(|f| ElementStencil::tet(points[f[0]], points[f[1]], points[f[2]]))
        .collect::<Result<Vec<_>, _>>()?;
    Patch::from_stencils(center, stencils)
}

/// Check that a planar polygon is counterclockwise and star-shaped about `c`.
pub fn is_star_about(poly: &[Point], c: &Point) -> bool {
    let n = poly.len();
    (0..n).all(|i| orient2(c, &poly[i], &poly[(i + 1) % n]) > 0.0)
}
