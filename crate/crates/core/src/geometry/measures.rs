use super::{orient2, Ball, GeometryError, Point};

/// Metric data of a triangle. Index `i` of `edges` and `altitudes` refers to
/// the edge opposite vertex `i`; `angles[i]` is the angle at vertex `i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleMeasures {
    /// Signed (counterclockwise positive) for planar input, unsigned in space.
    pub area: f64,
    pub edges: [f64; 3],
    pub angles: [f64; 3],
    pub altitudes: [f64; 3],
    pub perimeter: f64,
    /// Infinite for a degenerate triangle.
    pub circumradius: f64,
    pub inradius: f64,
    pub degenerate: bool,
}

/// Angle at `o` between the rays towards `p` and `q`, in [0, pi].
#[inline]
pub fn angle_at(o: &Point, p: &Point, q: &Point) -> f64 {
    let u = *p - *o;
    let v = *q - *o;
    u.cross(&v).norm().atan2(u.dot(&v))
}

/// Unsigned area of a triangle in the plane or in space.
#[inline]
pub fn triangle_area(a: &Point, b: &Point, c: &Point) -> f64 {
    0.5 * (*b - *a).cross(&(*c - *a)).norm()
}

pub fn triangle_measures(a: &Point, b: &Point, c: &Point) -> TriangleMeasures {
    let v = [*a, *b, *c];
    let edges = [b.distance(c), c.distance(a), a.distance(b)];
    let area = if a.dim() == 2 && b.dim() == 2 && c.dim() == 2 {
        orient2(a, b, c)
    } else {
        triangle_area(a, b, c)
    };
    let angles = [
        angle_at(&v[0], &v[1], &v[2]),
        angle_at(&v[1], &v[2], &v[0]),
        angle_at(&v[2], &v[0], &v[1]),
    ];
    let lmax = edges.iter().cloned().fold(0.0, f64::max);
    let abs_area = area.abs();
    let degenerate = abs_area <= 1e-14 * lmax * lmax;
    let perimeter = edges.iter().sum::<f64>();
    let altitudes = edges.map(|e| if e > 0.0 { 2.0 * abs_area / e } else { 0.0 });
    let (circumradius, inradius) = if degenerate {
        (f64::INFINITY, 0.0)
    } else {
        (
            edges[0] * edges[1] * edges[2] / (4.0 * abs_area),
            2.0 * abs_area / perimeter,
        )
    };
    TriangleMeasures {
        area,
        edges,
        angles,
        altitudes,
        perimeter,
        circumradius,
        inradius,
        degenerate,
    }
}

/// Ball through the points of `s` centred in their affine hull, if the points
/// are affinely independent.
fn circumball(s: &[Point]) -> Option<Ball> {
    match s.len() {
        0 => None,
        1 => Some(Ball { center: s[0], radius: 0.0 }),
        2 => Some(Ball { center: s[0].midpoint(&s[1]), radius: 0.5 * s[0].distance(&s[1]) }),
        _ => {
            let k = s.len() - 1;
            if k > 3 {
                return None;
            }
            let d: Vec<Point> = s[1..].iter().map(|p| *p - s[0]).collect();
            let mut m = [[0.0; 4]; 3];
            for i in 0..k {
                for j in 0..k {
                    m[i][j] = 2.0 * d[i].dot(&d[j]);
                }
                m[i][3] = d[i].norm_sq();
            }
            let scale = d.iter().map(|v| v.norm_sq()).fold(0.0, f64::max);
            let lam = solve_small(&mut m, k, 1e-12 * scale)?;
            let mut off = Point::origin(s[0].dim());
            for i in 0..k {
                off += d[i] * lam[i];
            }
            Some(Ball { center: s[0] + off, radius: off.norm() })
        }
    }
}

/// Gauss-Jordan elimination on a k x k system whose right-hand side is column 3.
fn solve_small(m: &mut [[f64; 4]; 3], k: usize, pivot_tol: f64) -> Option<[f64; 3]> {
    for col in 0..k {
        let piv = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() <= pivot_tol || m[piv][col] == 0.0 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..k {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in (col..k).chain(std::iter::once(3)) {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    let mut out = [0.0; 3];
    for i in 0..k {
        out[i] = m[i][3] / m[i][i];
    }
    Some(out)
}

/// Smallest ball containing all `points` (brute force over support sets, so
/// intended for a handful of points).
pub fn min_enclosing_ball(points: &[Point]) -> Ball {
    assert!(!points.is_empty(), "min_enclosing_ball needs at least one point");
    let n = points.len();
    let spread = points.iter().map(|p| p.distance(&points[0])).fold(0.0, f64::max);
    let tol = 1e-12 * spread.max(f64::MIN_POSITIVE);
    let max_support = (points[0].dim() + 1).min(n);
    let mut best: Option<Ball> = None;
    let mut subset = Vec::with_capacity(4);
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size > max_support {
            continue;
        }
        subset.clear();
        subset.extend((0..n).filter(|i| mask & (1 << i) != 0).map(|i| points[i]));
        let Some(ball) = circumball(&subset) else { continue };
        if best.as_ref().is_some_and(|b| b.radius <= ball.radius) {
            continue;
        }
        if points.iter().all(|p| ball.contains(p, tol + 1e-12 * ball.radius)) {
            best = Some(ball);
        }
    }
    best.expect("some support set always encloses the points")
}

/// Unsigned solid angle at `o` subtended by the triangle (a, b, c), in [0, 2 pi).
pub fn solid_angle(o: &Point, a: &Point, b: &Point, c: &Point) -> Result<f64, GeometryError> {
    let u = (*a - *o).normalized().ok_or(GeometryError::ZeroVector)?;
    let v = (*b - *o).normalized().ok_or(GeometryError::ZeroVector)?;
    let w = (*c - *o).normalized().ok_or(GeometryError::ZeroVector)?;
    Ok(solid_angle_units(&u, &v, &w))
}

#[inline]
pub(crate) fn solid_angle_units(u: &Point, v: &Point, w: &Point) -> f64 {
    let num = u.dot(&v.cross(w)).abs();
    let den = 1.0 + u.dot(v) + v.dot(w) + w.dot(u);
    2.0 * num.atan2(den)
}

/// Interior dihedral angle along edge (p, q) between faces (p, q, r) and (p, q, s).
pub fn dihedral_angle(p: &Point, q: &Point, r: &Point, s: &Point) -> Result<f64, GeometryError> {
    let e = (*q - *p).normalized().ok_or(GeometryError::ZeroVector)?;
    let u = *r - *p;
    let v = *s - *p;
    let u = u - e * u.dot(&e);
    let v = v - e * v.dot(&e);
    if u.norm() == 0.0 || v.norm() == 0.0 {
        return Err(GeometryError::Degenerate("face collinear with the dihedral axis".into()));
    }
    Ok(u.cross(&v).norm().atan2(u.dot(&v)))
}
