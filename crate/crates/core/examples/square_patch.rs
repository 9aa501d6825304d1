//! Place the free vertex of a four-triangle square patch to maximize the
//! smallest angle. The optimum is the centre, where every angle is 45 degrees.

use meshplace::criteria::{Criterion, CriterionKind};
use meshplace::fixtures::square_patch;
use meshplace::geometry::Point;
use meshplace::qcp::{grid_oracle, solve};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let patch = square_patch(Point::new2(0.35, -0.2));
    let program = patch.program(&[Criterion::new(CriterionKind::MinAngle)])?;
    let r = solve(&program, Some(patch.position), 1e-10, 500)?;
    println!("start      {:?}", patch.position.coords());
    println!("optimum    {:?}", r.optimum.x.coords());
    println!("min angle  {:.6} deg", -r.optimum.t.to_degrees());
    println!("status     {:?} after {} iterations", r.status, r.iterations);
    let g = grid_oracle(&program, 4)?;
    println!("grid check {:.6} deg at {:?}", -g.optimum.t.to_degrees(), g.optimum.x.coords());
    Ok(())
}
