//! Minimize the largest angle and the largest circumradius, neither of
//! which is quasiconvex, with the circle and line candidate search.

use meshplace::geometry::Point;
use meshplace::mesh::Patch;
use meshplace::special::{minmax_angle_place, minmax_circumradius_place};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = 3f64.sqrt() / 2.0;
    let hexagon: Vec<Point> = (0..6)
        .map(|k| {
            let a = k as f64 * std::f64::consts::FRAC_PI_3;
            Point::new2(a.cos(), a.sin())
        })
        .collect();
    let triangle = [Point::new2(1.0, 0.0), Point::new2(-0.5, h), Point::new2(-0.5, -h)];
    for (name, ring) in [("hexagon", &hexagon[..]), ("triangle", &triangle[..])] {
        let patch = Patch::from_star_polygon(Point::new2(0.2, 0.1), ring)?;
        let a = minmax_angle_place(&patch, 1e-10)?;
        let r = minmax_circumradius_place(&patch, 1e-10)?;
        println!(
            "{name:<9} max angle {:.6} deg at ({:.6}, {:.6}); circumradius {:.6} at ({:.6}, {:.6})",
            a.objective.to_degrees(),
            a.point.x(),
            a.point.y(),
            r.objective,
            r.point.x(),
            r.point.y()
        );
    }
    Ok(())
}
