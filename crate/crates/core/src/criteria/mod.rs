//! Element quality criteria and their cost functions of the free vertex.
//!
//! Every criterion is expressed as a cost to minimize: maximize-min criteria
//! use the negated quality. An element that is inverted, degenerate or (for
//! quadrilaterals) nonconvex costs `+inf`.

mod eval;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Halfspace, Point};

pub use eval::{bank_smith_quality, element_quality};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CriterionError {
    #[error("unknown criterion `{name}`; valid names: {valid}")]
    UnknownCriterion { name: String, valid: String },
    #[error("criterion `{criterion}` does not apply to {element} elements")]
    Incompatible { criterion: String, element: String },
    #[error("invalid weight `{0}`; weights must be positive and finite")]
    BadWeight(String),
    #[error("element stencil: {0}")]
    BadStencil(String),
    #[error("no cost terms given")]
    NoTerms,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Triangle,
    Quad,
    Tetrahedron,
}

impl ElementKind {
    pub fn dim(self) -> usize {
        match self {
            ElementKind::Tetrahedron => 3,
            _ => 2,
        }
    }

    pub fn num_nodes(self) -> usize {
        match self {
            ElementKind::Triangle => 3,
            _ => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ElementKind::Triangle => "triangle",
            ElementKind::Quad => "quad",
            ElementKind::Tetrahedron => "tetrahedron",
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    MinimizeMax,
    MaximizeMin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quasiconvexity {
    Yes,
    No,
    Conjectured,
}

macro_rules! criteria_table {
    ($($variant:ident => $name:literal, $sense:ident, $qc:ident, [$($ek:ident),+];)+) => {
        /// The supported quality criteria.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum CriterionKind {
            $($variant,)+
        }

        impl CriterionKind {
            pub const ALL: &'static [CriterionKind] = &[$(CriterionKind::$variant,)+];

            pub fn name(self) -> &'static str {
                match self {
                    $(CriterionKind::$variant => $name,)+
                }
            }

            pub fn sense(self) -> Sense {
                match self {
                    $(CriterionKind::$variant => Sense::$sense,)+
                }
            }

            pub fn quasiconvexity(self) -> Quasiconvexity {
                match self {
                    $(CriterionKind::$variant => Quasiconvexity::$qc,)+
                }
            }

            pub fn element_kinds(self) -> &'static [ElementKind] {
                match self {
                    $(CriterionKind::$variant => &[$(ElementKind::$ek),+],)+
                }
            }
        }
    };
}

criteria_table! {
    MinAngle => "min-angle", MaximizeMin, Yes, [Triangle, Quad];
    MaxAngleExternal => "max-angle-ext", MinimizeMax, Yes, [Triangle];
    MaxAngle => "max-angle", MinimizeMax, No, [Triangle];
    AreaMin => "area-min", MinimizeMax, Yes, [Triangle, Quad];
    AreaMax => "area-max", MaximizeMin, Yes, [Triangle, Quad];
    ExtAltitudeMin => "ext-altitude-min", MinimizeMax, Yes, [Triangle];
    ExtAltitudeMax => "ext-altitude-max", MaximizeMin, Yes, [Triangle];
    IntAltitudeMin => "int-altitude-min", MaximizeMin, Yes, [Triangle];
    EdgeLength => "edge-length", MinimizeMax, Yes, [Triangle, Quad, Tetrahedron];
    Diameter => "diameter", MinimizeMax, Yes, [Triangle, Tetrahedron];
    AspectRatio => "aspect-ratio", MinimizeMax, Yes, [Triangle];
    Perimeter => "perimeter", MinimizeMax, Yes, [Triangle, Quad];
    PerimeterMaxMin => "perimeter-max-min", MaximizeMin, No, [Triangle];
    ContainingCircle => "containing-circle", MinimizeMax, Yes, [Triangle];
    Inradius => "inradius", MaximizeMin, Yes, [Triangle];
    BankSmith => "bank-smith", MaximizeMin, Yes, [Triangle];
    Circumradius => "circumradius", MinimizeMax, No, [Triangle];
    QuadWidth => "quad-width", MaximizeMin, Yes, [Quad];
    QuadContainingCircle => "quad-containing-circle", MinimizeMax, Yes, [Quad];
    QuadDiameter => "quad-diameter", MinimizeMax, Yes, [Quad];
    QuadInradius => "quad-inradius", MaximizeMin, Conjectured, [Quad];
    VolumeMin => "volume-min", MinimizeMax, Yes, [Tetrahedron];
    VolumeMax => "volume-max", MaximizeMin, Yes, [Tetrahedron];
    Altitude => "altitude", MaximizeMin, Yes, [Tetrahedron];
    FaceArea => "face-area", MinimizeMax, Yes, [Tetrahedron];
    TotalSurface => "total-surface", MinimizeMax, Yes, [Tetrahedron];
    TotalEdgeLength => "total-edge-length", MinimizeMax, Yes, [Tetrahedron];
    ContainingSphere => "containing-sphere", MinimizeMax, Yes, [Tetrahedron];
    DihedralFixedAxis => "dihedral-fixed-axis", MinimizeMax, Yes, [Tetrahedron];
    SolidAngleInterior => "solid-angle-interior", MaximizeMin, Yes, [Tetrahedron];
    SolidAngleExterior => "solid-angle-exterior", MaximizeMin, Yes, [Tetrahedron];
}

impl CriterionKind {
    pub fn from_name(name: &str) -> Result<Self, CriterionError> {
        CriterionKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == name)
            .ok_or_else(|| CriterionError::UnknownCriterion {
                name: name.to_string(),
                valid: CriterionKind::ALL.iter().map(|k| k.name()).collect::<Vec<_>>().join(", "),
            })
    }

    pub fn applies_to(self, kind: ElementKind) -> bool {
        self.element_kinds().contains(&kind)
    }

    pub fn dimension(self) -> usize {
        self.element_kinds()[0].dim()
    }

    pub fn is_quasiconvex(self) -> bool {
        self.quasiconvexity() != Quasiconvexity::No
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A criterion with a positive weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Criterion {
    pub kind: CriterionKind,
    pub weight: f64,
}

impl Criterion {
    pub fn new(kind: CriterionKind) -> Self {
        Criterion { kind, weight: 1.0 }
    }

    pub fn weighted(kind: CriterionKind, weight: f64) -> Result<Self, CriterionError> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(CriterionError::BadWeight(weight.to_string()));
        }
        Ok(Criterion { kind, weight })
    }

    pub fn sense(&self) -> Sense {
        self.kind.sense()
    }

    pub fn quasiconvexity(&self) -> Quasiconvexity {
        self.kind.quasiconvexity()
    }

    /// Parse a comma separated list such as `min-angle,edge-length:0.5`.
    pub fn parse_list(s: &str) -> Result<Vec<Criterion>, CriterionError> {
        let list = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()?;
        if list.is_empty() {
            return Err(CriterionError::NoTerms);
        }
        Ok(list)
    }
}

impl FromStr for Criterion {
    type Err = CriterionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some((name, w)) => {
                let weight: f64 = w.trim().parse().map_err(|_| CriterionError::BadWeight(w.to_string()))?;
                Criterion::weighted(CriterionKind::from_name(name.trim())?, weight)
            }
            None => Ok(Criterion::new(CriterionKind::from_name(s)?)),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weight == 1.0 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}:{}", self.kind, self.weight)
        }
    }
}

/// The fixed vertices of one element incident to the free vertex `x`.
///
/// Orientation conventions: triangle (x, a, b) counterclockwise; quad
/// (x, v1, v2, v3) counterclockwise; tetrahedron (x, v1, v2, v3) with
/// positive `orient3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementStencil {
    pub kind: ElementKind,
    pub fixed: Vec<Point>,
}

impl ElementStencil {
    pub fn new(kind: ElementKind, fixed: Vec<Point>) -> Result<Self, CriterionError> {
        if fixed.len() != kind.num_nodes() - 1 {
            return Err(CriterionError::BadStencil(format!(
                "{kind} stencil needs {} fixed vertices, got {}",
                kind.num_nodes() - 1,
                fixed.len()
            )));
        }
        if let Some(p) = fixed.iter().find(|p| p.dim() != kind.dim() || !p.is_finite()) {
            return Err(CriterionError::BadStencil(format!(
                "{kind} stencil vertex {p:?} is not a finite {}D point",
                kind.dim()
            )));
        }
        for i in 0..fixed.len() {
            for j in i + 1..fixed.len() {
                if fixed[i] == fixed[j] {
                    return Err(CriterionError::BadStencil("repeated fixed vertex".into()));
                }
            }
        }
        Ok(ElementStencil { kind, fixed })
    }

    pub fn triangle(a: Point, b: Point) -> Result<Self, CriterionError> {
        ElementStencil::new(ElementKind::Triangle, vec![a, b])
    }

    pub fn quad(v1: Point, v2: Point, v3: Point) -> Result<Self, CriterionError> {
        ElementStencil::new(ElementKind::Quad, vec![v1, v2, v3])
    }

    pub fn tet(v1: Point, v2: Point, v3: Point) -> Result<Self, CriterionError> {
        ElementStencil::new(ElementKind::Tetrahedron, vec![v1, v2, v3])
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    /// The fixed vertices joined to `x` by an element edge.
    pub fn edge_neighbors(&self) -> Vec<Point> {
        match self.kind {
            ElementKind::Quad => vec![self.fixed[0], self.fixed[2]],
            _ => self.fixed.clone(),
        }
    }
}

/// One criterion applied to one element stencil.
#[derive(Clone, Debug, PartialEq)]
pub struct CostTerm {
    pub criterion: Criterion,
    pub stencil: ElementStencil,
}

impl CostTerm {
    pub fn new(criterion: Criterion, stencil: ElementStencil) -> Result<Self, CriterionError> {
        if !criterion.kind.applies_to(stencil.kind) {
            return Err(CriterionError::Incompatible {
                criterion: criterion.kind.name().into(),
                element: stencil.kind.name().into(),
            });
        }
        Ok(CostTerm { criterion, stencil })
    }

    /// Push the smooth pieces whose maximum is the (unweighted) cost at `x`.
    pub fn components(&self, x: &Point, out: &mut Vec<f64>) {
        eval::components(self.criterion.kind, &self.stencil, x, out)
    }

    /// Unweighted canonical cost at `x`.
    pub fn cost(&self, x: &Point) -> f64 {
        let mut buf = Vec::with_capacity(8);
        self.components(x, &mut buf);
        buf.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Weighted cost at `x`.
    pub fn weighted_cost(&self, x: &Point) -> f64 {
        self.criterion.weight * self.cost(x)
    }
}

/// Canonical (unweighted) cost of one element as a function of the free vertex.
pub fn element_cost(term: &CostTerm, x: &Point) -> f64 {
    term.cost(x)
}

/// Maximum weighted cost over all terms.
pub fn patch_cost(terms: &[CostTerm], x: &Point) -> Result<f64, CriterionError> {
    if terms.is_empty() {
        return Err(CriterionError::NoTerms);
    }
    Ok(terms.iter().map(|t| t.weighted_cost(x)).fold(f64::NEG_INFINITY, f64::max))
}

/// Extra halfplanes keeping the quad (x, v1, v2, v3) convex: x beyond the
/// diagonal v1 v3, and convex turns at v1 and v3.
pub fn quad_domain_constraints(stencil: &ElementStencil) -> Result<Vec<Halfspace>, CriterionError> {
    if stencil.kind != ElementKind::Quad {
        return Err(CriterionError::Incompatible {
            criterion: "quad domain".into(),
            element: stencil.kind.name().into(),
        });
    }
    let [v1, v2, v3] = [stencil.fixed[0], stencil.fixed[1], stencil.fixed[2]];
    let turn = (v2 - v1).cross2(&(v3 - v2));
    let scale = v1.distance(&v2).max(v2.distance(&v3));
    if turn <= 1e-12 * scale * scale {
        return Err(CriterionError::BadStencil(
            "fixed quad vertices are collinear or turn clockwise".into(),
        ));
    }
    Ok(vec![
        Halfspace::left_of(&v1, &v3),
        Halfspace::left_of(&v1, &v2),
        Halfspace::left_of(&v2, &v3),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for &k in CriterionKind::ALL {
            assert_eq!(CriterionKind::from_name(k.name()).unwrap(), k);
        }
    }

    #[test]
    fn unknown_name_lists_valid_names() {
        let e = CriterionKind::from_name("nope").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("min-angle") && msg.contains("solid-angle-exterior"));
    }

    #[test]
    fn parse_weighted_list() {
        let l = Criterion::parse_list("min-angle, edge-length:0.5").unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l[1].weight, 0.5);
        assert!(Criterion::parse_list("min-angle:-1").is_err());
        assert!(Criterion::parse_list("").is_err());
    }

    #[test]
    fn incompatible_term_rejected() {
        let s = ElementStencil::triangle(Point::new2(1.0, 0.0), Point::new2(0.0, 1.0)).unwrap();
        assert!(CostTerm::new(Criterion::new(CriterionKind::VolumeMin), s).is_err());
    }

    #[test]
    fn empty_patch_cost_is_error() {
        assert_eq!(patch_cost(&[], &Point::new2(0.0, 0.0)), Err(CriterionError::NoTerms));
    }

    #[test]
    fn quad_constraints_admit_the_fourth_vertex() {
        let s = ElementStencil::quad(Point::new2(1.0, 0.0), Point::new2(1.0, 1.0), Point::new2(0.0, 1.0))
            .unwrap();
        let hs = quad_domain_constraints(&s).unwrap();
        assert!(hs.iter().all(|h| h.contains(&Point::new2(0.0, 0.0), 0.0)));
        assert!(!hs[0].contains(&Point::new2(0.8, 0.8), 0.0));
        let flat = ElementStencil::quad(Point::new2(0.0, 0.0), Point::new2(1.0, 0.0), Point::new2(2.0, 0.0))
            .unwrap();
        assert!(quad_domain_constraints(&flat).is_err());
    }
}
