//! Move the free vertex of a tetrahedral star away from a near-flat
//! configuration by maximizing the smallest interior solid angle.

use meshplace::criteria::{Criterion, CriterionKind};
use meshplace::fixtures::{min_solid_angle_at, sliver_fixture};
use meshplace::mesh::optimal_placement;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for eps in [0.05, 0.01, 0.002] {
        let f = sliver_fixture(eps);
        let p = optimal_placement(&f.patch, &[Criterion::new(CriterionKind::SolidAngleInterior)], 1e-10, 500)?;
        let after = min_solid_angle_at(&f.patch, &p.point);
        println!(
            "eps {eps:<6} min solid angle {:.6} -> {:.6} sr (x{:.1}), vertex at {:?}",
            f.baseline_min_solid_angle,
            after,
            after / f.baseline_min_solid_angle,
            p.point.coords()
        );
    }
    Ok(())
}
