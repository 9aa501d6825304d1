use serde::Serialize;

use crate::criteria::{element_quality, Criterion, Sense};

use super::Mesh;

pub const HISTOGRAM_BINS: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionQuality {
    pub criterion: String,
    pub sense: Sense,
    /// Number of elements the criterion applies to.
    pub elements: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub histogram: Histogram,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct QualityReport {
    pub criteria: Vec<CriterionQuality>,
}

impl QualityReport {
    /// One row per criterion; histogram counts are `;`-separated.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("criterion,sense,elements,min,max,mean,histogram_lo,histogram_hi,histogram\n");
        for c in &self.criteria {
            let sense = match c.sense {
                Sense::MaximizeMin => "maximize_min",
                Sense::MinimizeMax => "minimize_max",
            };
            let counts: Vec<String> = c.histogram.counts.iter().map(|n| n.to_string()).collect();
            s.push_str(&format!(
                "{},{},{},{:?},{:?},{:?},{:?},{:?},{}\n",
                c.criterion,
                sense,
                c.elements,
                c.min,
                c.max,
                c.mean,
                c.histogram.lo,
                c.histogram.hi,
                counts.join(";")
            ));
        }
        s
    }
}

fn qualities(mesh: &Mesh, c: &Criterion) -> Vec<f64> {
    (0..mesh.elements.len())
        .filter_map(|e| element_quality(c, mesh.elements[e].kind, &mesh.element_points(e)))
        .collect()
}

/// Element qualities in natural units, summarized per criterion. Weights
/// are ignored.
pub fn quality_report(mesh: &Mesh, criteria: &[Criterion]) -> QualityReport {
    let criteria = criteria
        .iter()
        .map(|c| {
            let q = qualities(mesh, c);
            let min = q.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mean = if q.is_empty() { f64::NAN } else { q.iter().sum::<f64>() / q.len() as f64 };
            let mut counts = vec![0; HISTOGRAM_BINS];
            let width = (max - min) / HISTOGRAM_BINS as f64;
            for &v in &q {
                let bin = if width > 0.0 && width.is_finite() {
                    (((v - min) / width) as usize).min(HISTOGRAM_BINS - 1)
                } else {
                    0
                };
                counts[bin] += 1;
            }
            CriterionQuality {
                criterion: c.kind.to_string(),
                sense: c.sense(),
                elements: q.len(),
                min,
                max,
                mean,
                histogram: Histogram { lo: min, hi: max, counts },
            }
        })
        .collect();
    QualityReport { criteria }
}

/// The worst element quality: the minimum for maximize-min criteria, the
/// maximum otherwise. `None` if the criterion applies to no element.
pub fn worst_quality(mesh: &Mesh, c: &Criterion) -> Option<f64> {
    let q = qualities(mesh, c);
    if q.is_empty() {
        return None;
    }
    Some(match c.sense() {
        Sense::MaximizeMin => q.into_iter().fold(f64::INFINITY, f64::min),
        Sense::MinimizeMax => q.into_iter().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Largest weighted canonical cost over all elements and criteria.
pub(super) fn mesh_objective(mesh: &Mesh, criteria: &[Criterion]) -> f64 {
    criteria
        .iter()
        .filter_map(|c| {
            worst_quality(mesh, c).map(|q| match c.sense() {
                Sense::MaximizeMin => -c.weight * q,
                Sense::MinimizeMax => c.weight * q,
            })
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
