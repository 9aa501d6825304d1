use super::{CostTerm, Criterion, CriterionKind as K, ElementKind, ElementStencil, Sense};
use crate::geometry::{
    angle_at, dihedral_angle, min_enclosing_ball, orient2, orient3, solid_angle_units, triangle_area, Point,
};

const INF: f64 = f64::INFINITY;

/// Bank-Smith quality 4 sqrt(3) A / (sum of squared edges); 1 for equilateral.
pub fn bank_smith_quality(a: &Point, b: &Point, c: &Point) -> f64 {
    let area = triangle_area(a, b, c);
    let s = a.distance(b).powi(2) + b.distance(c).powi(2) + c.distance(a).powi(2);
    if s == 0.0 {
        return 0.0;
    }
    4.0 * 3f64.sqrt() * area / s
}

pub(super) fn components(kind: K, st: &ElementStencil, x: &Point, out: &mut Vec<f64>) {
    out.clear();
    match st.kind {
        ElementKind::Triangle => triangle(kind, x, &st.fixed[0], &st.fixed[1], out),
        ElementKind::Quad => quad(kind, x, &st.fixed[0], &st.fixed[1], &st.fixed[2], out),
        ElementKind::Tetrahedron => tet(kind, x, &st.fixed[0], &st.fixed[1], &st.fixed[2], out),
    }
}

fn triangle(kind: K, x: &Point, a: &Point, b: &Point, out: &mut Vec<f64>) {
    let area = orient2(x, a, b);
    let lxa = x.distance(a);
    let lxb = x.distance(b);
    let lab = a.distance(b);
    let lmax = lxa.max(lxb).max(lab);
    if !(area > 1e-14 * lmax * lmax) {
        out.push(INF);
        return;
    }
    match kind {
        K::MinAngle => out.extend([
            -angle_at(x, a, b),
            -angle_at(a, b, x),
            -angle_at(b, x, a),
        ]),
        K::MaxAngleExternal => out.extend([angle_at(a, b, x), angle_at(b, x, a)]),
        K::MaxAngle => out.extend([angle_at(x, a, b), angle_at(a, b, x), angle_at(b, x, a)]),
        K::AreaMin => out.push(area),
        K::AreaMax => out.push(-area),
        K::ExtAltitudeMin => out.push(2.0 * area / lab),
        K::ExtAltitudeMax => out.push(-2.0 * area / lab),
        K::IntAltitudeMin => out.extend([-2.0 * area / lxb, -2.0 * area / lxa]),
        K::EdgeLength => out.extend([lxa, lxb]),
        K::Diameter => out.extend([lxa, lxb, lab]),
        K::AspectRatio => out.extend([lxa, lxb, lab].map(|l| l * l / (2.0 * area))),
        K::Perimeter => out.push(lxa + lxb + lab),
        K::PerimeterMaxMin => out.push(-(lxa + lxb + lab)),
        K::ContainingCircle => out.push(min_enclosing_ball(&[*x, *a, *b]).radius),
        K::Inradius => out.push(-2.0 * area / (lxa + lxb + lab)),
        K::BankSmith => out.push(-4.0 * 3f64.sqrt() * area / (lxa * lxa + lxb * lxb + lab * lab)),
        K::Circumradius => out.push(lxa * lxb * lab / (4.0 * area)),
        _ => unreachable!("{kind} is not a triangle criterion"),
    }
}

/// Distance from `p` to the line through `q` and `r`.
fn line_distance(p: &Point, q: &Point, r: &Point) -> f64 {
    let d = *r - *q;
    (d.cross2(&(*p - *q))).abs() / d.norm()
}

/// Radius of the largest disk inside a convex counterclockwise quadrilateral.
fn quad_inradius(v: &[Point; 4]) -> f64 {
    // Each inscribed-disk LP vertex is tangent to three edge lines.
    let lines: Vec<(Point, f64)> = (0..4)
        .map(|i| {
            let (p, q) = (v[i], v[(i + 1) % 4]);
            let d = q - p;
            let n = Point::new2(d.y(), -d.x()) / d.norm();
            (n, n.dot(&p))
        })
        .collect();
    let mut best: f64 = 0.0;
    for skip in 0..4 {
        let t: Vec<&(Point, f64)> = (0..4).filter(|&i| i != skip).map(|i| &lines[i]).collect();
        // Solve n_i . c + r = b_i by Cramer's rule.
        let m = [
            [t[0].0.x(), t[0].0.y(), 1.0],
            [t[1].0.x(), t[1].0.y(), 1.0],
            [t[2].0.x(), t[2].0.y(), 1.0],
        ];
        let rhs = [t[0].1, t[1].1, t[2].1];
        let det3 = |m: &[[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let d = det3(&m);
        if d.abs() < 1e-14 {
            continue;
        }
        let mut sol = [0.0; 3];
        for (col, s) in sol.iter_mut().enumerate() {
            let mut mc = m;
            for row in 0..3 {
                mc[row][col] = rhs[row];
            }
            *s = det3(&mc) / d;
        }
        let c = Point::new2(sol[0], sol[1]);
        let r = sol[2];
        let (n4, b4) = lines[skip];
        if r > best && n4.dot(&c) + r <= b4 + 1e-12 * (1.0 + b4.abs()) {
            best = r;
        }
    }
    best
}

fn quad(kind: K, x: &Point, v1: &Point, v2: &Point, v3: &Point, out: &mut Vec<f64>) {
    let v = [*x, *v1, *v2, *v3];
    let lmax = (0..4).map(|i| v[i].distance(&v[(i + 1) % 4])).fold(0.0, f64::max);
    let eps = 1e-14 * lmax * lmax;
    let convex = (0..4).all(|i| (v[(i + 1) % 4] - v[i]).cross2(&(v[(i + 2) % 4] - v[(i + 1) % 4])) > eps);
    if !convex {
        out.push(INF);
        return;
    }
    match kind {
        K::MinAngle => out.extend([
            -angle_at(x, v1, v3),
            -angle_at(v1, v2, x),
            -angle_at(v2, v3, v1),
            -angle_at(v3, x, v2),
        ]),
        K::AreaMin | K::AreaMax => {
            let area = orient2(x, v1, v2) + orient2(x, v2, v3);
            out.push(if kind == K::AreaMin { area } else { -area });
        }
        K::EdgeLength => out.extend([x.distance(v1), x.distance(v3)]),
        K::Perimeter => out.push(x.distance(v1) + v1.distance(v2) + v2.distance(v3) + v3.distance(x)),
        K::QuadWidth => {
            for i in 0..4 {
                for off in [1, 2] {
                    let (q, r) = (v[(i + off) % 4], v[(i + off + 1) % 4]);
                    out.push(-line_distance(&v[i], &q, &r));
                }
            }
        }
        K::QuadContainingCircle => out.extend([
            min_enclosing_ball(&[*x, *v1, *v2]).radius,
            min_enclosing_ball(&[*x, *v2, *v3]).radius,
            min_enclosing_ball(&[*x, *v1, *v3]).radius,
            min_enclosing_ball(&[*v1, *v2, *v3]).radius,
        ]),
        K::QuadDiameter => out.extend([
            x.distance(v1),
            x.distance(v2),
            x.distance(v3),
            v1.distance(v2),
            v2.distance(v3),
            v1.distance(v3),
        ]),
        K::QuadInradius => out.push(-quad_inradius(&v)),
        _ => unreachable!("{kind} is not a quad criterion"),
    }
}

#[inline]
fn unit(v: Point) -> Point {
    v / v.norm()
}

fn tet(kind: K, x: &Point, v1: &Point, v2: &Point, v3: &Point, out: &mut Vec<f64>) {
    let vol = orient3(x, v1, v2, v3);
    let edges = [
        x.distance(v1),
        x.distance(v2),
        x.distance(v3),
        v1.distance(v2),
        v2.distance(v3),
        v3.distance(v1),
    ];
    let lmax = edges.iter().cloned().fold(0.0, f64::max);
    if !(vol > 1e-14 * lmax * lmax * lmax) {
        out.push(INF);
        return;
    }
    // Face areas opposite x, v1, v2, v3.
    let faces = || {
        [
            triangle_area(v1, v2, v3),
            triangle_area(x, v2, v3),
            triangle_area(x, v1, v3),
            triangle_area(x, v1, v2),
        ]
    };
    match kind {
        K::VolumeMin => out.push(vol),
        K::VolumeMax => out.push(-vol),
        K::Altitude => out.extend(faces().map(|f| -3.0 * vol / f)),
        K::EdgeLength => out.extend(&edges[..3]),
        K::Diameter => out.extend(edges),
        K::FaceArea => out.extend(faces()),
        K::TotalSurface => out.push(faces().iter().sum()),
        K::TotalEdgeLength => out.push(edges.iter().sum()),
        K::ContainingSphere => out.push(min_enclosing_ball(&[*x, *v1, *v2, *v3]).radius),
        K::DihedralFixedAxis => {
            for (p, q, r) in [(v1, v2, v3), (v2, v3, v1), (v3, v1, v2)] {
                out.push(dihedral_angle(p, q, r, x).unwrap_or(INF));
            }
        }
        K::SolidAngleInterior => {
            out.push(-solid_angle_units(&unit(*v1 - *x), &unit(*v2 - *x), &unit(*v3 - *x)));
        }
        K::SolidAngleExterior => {
            for (o, p, q) in [(v1, v2, v3), (v2, v3, v1), (v3, v1, v2)] {
                out.push(-solid_angle_units(&unit(*x - *o), &unit(*p - *o), &unit(*q - *o)));
            }
        }
        _ => unreachable!("{kind} is not a tetrahedron criterion"),
    }
}

/// Quality of a whole element in natural units (e.g. its smallest angle for
/// `min-angle`), taking the worst value over every choice of free vertex.
///
/// `nodes` follows the orientation conventions of [`ElementStencil`].
/// Returns `None` if the criterion does not apply to the element kind.
pub fn element_quality(criterion: &Criterion, kind: ElementKind, nodes: &[Point]) -> Option<f64> {
    if !criterion.kind.applies_to(kind) || nodes.len() != kind.num_nodes() {
        return None;
    }
    let rotations: Vec<(usize, Vec<usize>)> = match kind {
        ElementKind::Triangle => (0..3).map(|i| (i, vec![(i + 1) % 3, (i + 2) % 3])).collect(),
        ElementKind::Quad => (0..4).map(|i| (i, vec![(i + 1) % 4, (i + 2) % 4, (i + 3) % 4])).collect(),
        ElementKind::Tetrahedron => vec![
            (0, vec![1, 2, 3]),
            (1, vec![0, 3, 2]),
            (2, vec![3, 0, 1]),
            (3, vec![2, 1, 0]),
        ],
    };
    let mut worst = f64::NEG_INFINITY;
    let mut buf = Vec::with_capacity(8);
    for (free, rest) in rotations {
        let st = ElementStencil { kind, fixed: rest.iter().map(|&j| nodes[j]).collect() };
        components(criterion.kind, &st, &nodes[free], &mut buf);
        worst = buf.iter().cloned().fold(worst, f64::max);
    }
    Some(match criterion.sense() {
        Sense::MaximizeMin => -worst,
        Sense::MinimizeMax => worst,
    })
}

impl CostTerm {
    /// Quality of this term's element in natural units at free position `x`.
    pub fn natural_quality(&self, x: &Point) -> f64 {
        let c = self.cost(x);
        match self.criterion.sense() {
            Sense::MaximizeMin => -c,
            Sense::MinimizeMax => c,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{Criterion, CriterionKind};
    use std::f64::consts::PI;

    fn p2(x: f64, y: f64) -> Point {
        Point::new2(x, y)
    }

    fn tri_cost(kind: CriterionKind, x: Point, a: Point, b: Point) -> f64 {
        let t = CostTerm::new(Criterion::new(kind), ElementStencil::triangle(a, b).unwrap()).unwrap();
        t.cost(&x)
    }

    #[test]
    fn equilateral_values() {
        let (x, a, b) = (p2(0.5, 3f64.sqrt() / 2.0), p2(0.0, 0.0), p2(1.0, 0.0));
        assert!((tri_cost(K::MinAngle, x, a, b) + PI / 3.0).abs() < 1e-12);
        assert!((tri_cost(K::AspectRatio, x, a, b) - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!((tri_cost(K::BankSmith, x, a, b) + 1.0).abs() < 1e-12);
        assert!((tri_cost(K::Circumradius, x, a, b) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bank_smith_345() {
        let q = bank_smith_quality(&p2(0.0, 0.0), &p2(4.0, 0.0), &p2(0.0, 3.0));
        assert!((q - 24.0 * 3f64.sqrt() / 50.0).abs() < 1e-12);
    }

    #[test]
    fn inverted_triangle_is_infinite() {
        assert_eq!(tri_cost(K::MinAngle, p2(0.5, -1.0), p2(0.0, 0.0), p2(1.0, 0.0)), INF);
        assert_eq!(tri_cost(K::AreaMax, p2(0.5, 0.0), p2(0.0, 0.0), p2(1.0, 0.0)), INF);
    }

    #[test]
    fn unit_square_quad() {
        let st = ElementStencil::quad(p2(1.0, 0.0), p2(1.0, 1.0), p2(0.0, 1.0)).unwrap();
        let x = p2(0.0, 0.0);
        let c = |k| CostTerm::new(Criterion::new(k), st.clone()).unwrap().cost(&x);
        assert!((c(K::QuadInradius) + 0.5).abs() < 1e-12);
        assert!((c(K::QuadWidth) + 1.0).abs() < 1e-12);
        assert!((c(K::QuadDiameter) - 2f64.sqrt()).abs() < 1e-12);
        assert!((c(K::AreaMax) + 1.0).abs() < 1e-12);
        assert!((c(K::MinAngle) + PI / 2.0).abs() < 1e-12);
        assert!((c(K::QuadContainingCircle) - 2f64.sqrt() / 2.0).abs() < 1e-12);
        // Reflex at x is infinite.
        let t = CostTerm::new(Criterion::new(K::AreaMax), st.clone()).unwrap();
        assert_eq!(t.cost(&p2(0.8, 0.8)), INF);
    }

    #[test]
    fn right_corner_tet() {
        let (x, v1, v2, v3) = (
            Point::new3(0.0, 0.0, 0.0),
            Point::new3(1.0, 0.0, 0.0),
            Point::new3(0.0, 1.0, 0.0),
            Point::new3(0.0, 0.0, 1.0),
        );
        let st = ElementStencil::tet(v1, v2, v3).unwrap();
        let c = |k| CostTerm::new(Criterion::new(k), st.clone()).unwrap().cost(&x);
        assert!((c(K::VolumeMax) + 1.0 / 6.0).abs() < 1e-15);
        assert!((c(K::SolidAngleInterior) + PI / 2.0).abs() < 1e-12);
        assert!((c(K::TotalEdgeLength) - (3.0 + 3.0 * 2f64.sqrt())).abs() < 1e-12);
        // The origin lies inside the circumball of the slanted face.
        assert!((c(K::ContainingSphere) - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        // Altitude from x onto the slanted face is 1/sqrt(3).
        assert!((c(K::Altitude) + 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let inverted = Point::new3(1.0, 1.0, 1.0);
        assert_eq!(CostTerm::new(Criterion::new(K::VolumeMax), st).unwrap().cost(&inverted), INF);
    }

    #[test]
    fn element_quality_of_right_triangle() {
        let nodes = [p2(0.0, 0.0), p2(1.0, 0.0), p2(0.0, 1.0)];
        let q = |k| element_quality(&Criterion::new(k), ElementKind::Triangle, &nodes).unwrap();
        assert!((q(K::MinAngle) - PI / 4.0).abs() < 1e-12);
        assert!((q(K::MaxAngleExternal) - PI / 2.0).abs() < 1e-12);
        assert!((q(K::EdgeLength) - 2f64.sqrt()).abs() < 1e-12);
        assert!((q(K::AreaMax) - 0.5).abs() < 1e-12);
    }
}
