//! Optimize one irregular star polygon under every planar triangle criterion.

use meshplace::criteria::{Criterion, CriterionKind, ElementKind};
use meshplace::geometry::Point;
use meshplace::mesh::{optimal_placement, Patch};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = [
        Point::new2(1.5, 0.0),
        Point::new2(0.4, 0.4),
        Point::new2(0.0, 1.2),
        Point::new2(-0.9, 0.8),
        Point::new2(-0.5, 0.0),
        Point::new2(-0.9, -0.8),
        Point::new2(0.0, -1.2),
        Point::new2(0.4, -0.4),
    ];
    let patch = Patch::from_star_polygon(Point::new2(0.1, 0.05), &ring)?;
    println!("{:<20} {:>10} {:>10} {:>12}  method", "criterion", "x", "y", "objective");
    for kind in CriterionKind::ALL.iter().copied().filter(|k| k.applies_to(ElementKind::Triangle)) {
        let p = optimal_placement(&patch, &[Criterion::new(kind)], 1e-9, 500)?;
        println!("{:<20} {:>10.5} {:>10.5} {:>12.6}  {:?}", kind.name(), p.point.x(), p.point.y(), p.objective, p.method);
    }
    Ok(())
}
