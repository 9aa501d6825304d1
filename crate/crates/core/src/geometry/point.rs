use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GeometryError;

/// A point or vector in the plane or in space.
///
/// Planar points carry a zero third coordinate so that the 3D formulas
/// (dot, cross) can be shared.
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    c: [f64; 3],
    dim: u8,
}

impl Point {
    pub const fn new2(x: f64, y: f64) -> Self {
        Point { c: [x, y, 0.0], dim: 2 }
    }

    pub const fn new3(x: f64, y: f64, z: f64) -> Self {
        Point { c: [x, y, z], dim: 3 }
    }

    pub fn origin(dim: usize) -> Self {
        debug_assert!(dim == 2 || dim == 3);
        Point { c: [0.0; 3], dim: dim as u8 }
    }

    /// Unit vector along axis `k`.
    pub fn axis(dim: usize, k: usize) -> Self {
        let mut p = Point::origin(dim);
        p.c[k] = 1.0;
        p
    }

    pub fn from_slice(c: &[f64]) -> Result<Self, GeometryError> {
        if c.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        match *c {
            [x, y] => Ok(Point::new2(x, y)),
            [x, y, z] => Ok(Point::new3(x, y, z)),
            _ => Err(GeometryError::BadArity(c.len())),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.c[..self.dim as usize]
    }

    pub fn x(&self) -> f64 {
        self.c[0]
    }

    pub fn y(&self) -> f64 {
        self.c[1]
    }

    pub fn z(&self) -> f64 {
        self.c[2]
    }

    pub fn with_coord(mut self, k: usize, v: f64) -> Self {
        self.c[k] = v;
        self
    }

    pub fn dot(&self, o: &Point) -> f64 {
        self.c[0] * o.c[0] + self.c[1] * o.c[1] + self.c[2] * o.c[2]
    }

    pub fn cross(&self, o: &Point) -> Point {
        Point::new3(
            self.c[1] * o.c[2] - self.c[2] * o.c[1],
            self.c[2] * o.c[0] - self.c[0] * o.c[2],
            self.c[0] * o.c[1] - self.c[1] * o.c[0],
        )
    }

    /// z-component of the planar cross product.
    pub fn cross2(&self, o: &Point) -> f64 {
        self.c[0] * o.c[1] - self.c[1] * o.c[0]
    }

    /// Rotate a planar vector counterclockwise by `theta`.
    pub fn rotate2(&self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new2(c * self.c[0] - s * self.c[1], s * self.c[0] + c * self.c[1])
    }

    /// Left-hand perpendicular of a planar vector.
    pub fn perp(&self) -> Point {
        Point::new2(-self.c[1], self.c[0])
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn distance(&self, o: &Point) -> f64 {
        (*self - *o).norm()
    }

    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| *self / n)
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    pub fn lerp(&self, o: &Point, t: f64) -> Point {
        *self + (*o - *self) * t
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        self.lerp(o, 0.5)
    }

    /// Lexicographic order on coordinates.
    pub fn lex_cmp(&self, o: &Point) -> Ordering {
        for k in 0..self.dim().max(o.dim()) {
            match self.c[k].total_cmp(&o.c[k]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.coords().to_vec()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Index<usize> for Point {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.c[k]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point {
            c: [self.c[0] + o.c[0], self.c[1] + o.c[1], self.c[2] + o.c[2]],
            dim: self.dim.max(o.dim),
        }
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point {
            c: [self.c[0] - o.c[0], self.c[1] - o.c[1], self.c[2] - o.c[2]],
            dim: self.dim.max(o.dim),
        }
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        *self = *self + o;
    }
}

impl SubAssign for Point {
    fn sub_assign(&mut self, o: Point) {
        *self = *self - o;
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point {
            c: [self.c[0] * s, self.c[1] * s, self.c[2] * s],
            dim: self.dim,
        }
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, s: f64) -> Point {
        Point {
            c: [self.c[0] / s, self.c[1] / s, self.c[2] / s],
            dim: self.dim,
        }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        self * -1.0
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Point::from_slice(&v).map_err(D::Error::custom)
    }
}

/// Signed area of the planar triangle (a, b, c); positive when counterclockwise.
pub fn orient2(a: &Point, b: &Point, c: &Point) -> f64 {
    0.5 * (*b - *a).cross2(&(*c - *a))
}

/// Signed volume of the tetrahedron (a, b, c, d); positive when d sees
/// (a, b, c) clockwise, i.e. det[b-a, c-a, d-a] > 0.
pub fn orient3(a: &Point, b: &Point, c: &Point, d: &Point) -> f64 {
    (*b - *a).cross(&(*c - *a)).dot(&(*d - *a)) / 6.0
}
