//! Geometric median of the neighbours of a free vertex, restricted to the
//! star kernel, by projected Weiszfeld iteration.

use meshplace::geometry::{ConvexRegion, Point};
use meshplace::special::weber_point;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sites = [Point::new2(0.0, 0.0), Point::new2(4.0, 0.0), Point::new2(1.0, 3.0), Point::new2(3.0, 3.0)];
    let free = ConvexRegion::cuboid(&Point::new2(-10.0, -10.0), &Point::new2(10.0, 10.0));
    let r = weber_point(&sites, &free, 1e-12)?;
    println!("unconstrained: ({:.9}, {:.9}) sum {:.9} in {} steps", r.point.x(), r.point.y(), r.objective, r.iterations);

    let strip = ConvexRegion::cuboid(&Point::new2(-10.0, -10.0), &Point::new2(10.0, 1.0));
    let r = weber_point(&sites, &strip, 1e-12)?;
    println!("y <= 1:        ({:.9}, {:.9}) sum {:.9}", r.point.x(), r.point.y(), r.objective);
    let monotone = r.trace.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    println!("trace monotone: {monotone}");
    Ok(())
}
