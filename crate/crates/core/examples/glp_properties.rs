//! Check that the placement value only grows as elements are added to the
//! problem, using the grid oracle.

use meshplace::criteria::{Criterion, CriterionKind};
use meshplace::fixtures::random_star_patch;
use meshplace::qcp::check_glp_monotonicity;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let patch = random_star_patch(&mut rng);
    let program = patch.program(&[Criterion::new(CriterionKind::MinAngle), Criterion::new(CriterionKind::EdgeLength)])?;
    let n = program.terms.len();
    let pairs: Vec<(Vec<usize>, Vec<usize>)> =
        (1..n).map(|k| ((0..k).collect(), (0..=k).collect())).collect();
    let report = check_glp_monotonicity(&program, &pairs)?;
    println!("{} terms, {} nested pairs", n, report.pairs_checked);
    println!("monotonicity violations: {}", report.violations.len());
    println!("locality checks {} violations {}", report.locality_checks, report.locality_violations);
    Ok(())
}
