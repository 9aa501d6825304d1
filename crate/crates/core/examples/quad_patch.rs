//! Quadrilateral patch: the free vertex must keep every quad convex, which
//! adds diagonal constraints to the kernel.

use meshplace::criteria::{Criterion, CriterionKind};
use meshplace::io::PatchFixture;
use meshplace::mesh::optimal_placement;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/quad_star.json");
    let patch = PatchFixture::load(&path)?.to_patch()?;
    println!("{} quads, {} domain constraints", patch.stencils.len(), patch.domain.len());
    for kind in [
        CriterionKind::MinAngle,
        CriterionKind::QuadWidth,
        CriterionKind::QuadContainingCircle,
        CriterionKind::QuadDiameter,
        CriterionKind::QuadInradius,
        CriterionKind::AreaMax,
    ] {
        let p = optimal_placement(&patch, &[Criterion::new(kind)], 1e-9, 500)?;
        println!("{:<24} ({:+.6}, {:+.6}) objective {:.6}", kind.name(), p.point.x(), p.point.y(), p.objective);
    }
    Ok(())
}
