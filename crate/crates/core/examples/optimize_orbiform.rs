//! Projected-gradient minimization of the area functional over the admissible
//! set. Every restart should land on a rotated Reuleaux triangle.
//!
//! `cargo run --release --example optimize_orbiform`

use std::f64::consts::PI;

use orbiform::harmonic::make_grid;
use orbiform::variational::{MinimizeParams, Problem};

fn main() -> orbiform::Result<()> {
    let problem = Problem::new(make_grid(2, 512)?, 1.0, 128)?;
    let results = problem.minimize_restarts(7, &MinimizeParams::default())?;
    let benchmark = (PI - 3f64.sqrt()) / 2.0;
    println!("{:>5} {:>12} {:>10} {:>10} {:>6}", "seed", "area", "gap", "violation", "iters");
    for r in &results {
        let area = r.area.expect("planar");
        println!(
            "{:>5} {:>12.8} {:>10.2e} {:>10.4} {:>6}",
            r.restart_seed,
            area,
            (area - benchmark) / benchmark,
            r.bangbang_violation,
            r.iterations
        );
    }

    let a = problem.canonical_align(&results[0].minimizer)?;
    let b = problem.canonical_align(&results[1].minimizer)?;
    let spread = problem.deviation(&a).axpy(-1.0, &problem.deviation(&b)).max_abs();
    println!("aligned support functions of the two best restarts differ by {spread:.2e}");
    Ok(())
}
