//! Kernel of a star-shaped polygon and its Chebyshev centre.

use meshplace::geometry::{chebyshev_center, halfspace_intersection, star_kernel, Point};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let star: Vec<Point> = (0..10)
        .map(|k| {
            let a = k as f64 * std::f64::consts::PI / 5.0;
            let r = if k % 2 == 0 { 1.0 } else { 0.45 };
            Point::new2(r * a.cos(), r * a.sin())
        })
        .collect();
    let kernel = star_kernel(&star)?;
    let poly = halfspace_intersection(&kernel);
    println!("kernel has {} vertices:", poly.vertices().len());
    for v in poly.vertices() {
        println!("  ({:+.6}, {:+.6})", v.x(), v.y());
    }
    if let Some(b) = chebyshev_center(&kernel) {
        println!("Chebyshev centre ({:+.6}, {:+.6}), radius {:.6}", b.center.x(), b.center.y(), b.radius);
    }
    Ok(())
}
