//! Smooth a perturbed triangulated grid with optimal placement and compare
//! against Laplacian smoothing.

use meshplace::criteria::{Criterion, CriterionKind};
use meshplace::fixtures::perturbed_grid;
use meshplace::mesh::{laplacian_smooth, sweep, worst_quality, LaplacianConfig, SmoothConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let min_angle = Criterion::new(CriterionKind::MinAngle);
    let start = perturbed_grid(10, 0.3, 7);
    let before = worst_quality(&start, &min_angle).unwrap();

    let mut opt = start.clone();
    let stats = sweep(&mut opt, &SmoothConfig::new(vec![min_angle]))?;
    let mut lap = start.clone();
    laplacian_smooth(&mut lap, &LaplacianConfig::default())?;
    let mut plain = start;
    laplacian_smooth(&mut plain, &LaplacianConfig { guarded: false, ..LaplacianConfig::default() })?;

    println!("worst min angle before         {:8.4} deg", before.to_degrees());
    println!("optimal placement ({} passes)   {:8.4} deg", stats.passes_run, worst_quality(&opt, &min_angle).unwrap().to_degrees());
    println!("guarded Laplacian              {:8.4} deg", worst_quality(&lap, &min_angle).unwrap().to_degrees());
    println!("plain Laplacian                {:8.4} deg", worst_quality(&plain, &min_angle).unwrap().to_degrees());
    for p in &stats.passes {
        println!("  pass {}: {} moves, objective {:.6}", p.pass, p.moves_accepted, p.objective);
    }
    Ok(())
}
