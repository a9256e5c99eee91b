//! Three-dimensional functionals and an exploratory minimization on S².
//!
//! `cargo run --release --example spheroform`

use std::f64::consts::PI;

use orbiform::harmonic::make_grid;
use orbiform::spheroform::{
    ball_curvature, blaschke_volume, explore_minimize3d, phi1, width_residual, SpheroformCandidate,
};
use orbiform::variational::MinimizeParams;

fn main() -> orbiform::Result<()> {
    let b = 1.0;
    println!("Φ₁(ball)           {:.10}", phi1(&ball_curvature(3, b, 8)?, 3)?);
    println!("ball volume        {:.10}  (π/6 = {:.10})", blaschke_volume(PI * b * b, b)?, PI / 6.0);

    let res = 32;
    let grid = make_grid(3, res)?;
    let params = MinimizeParams {
        restarts: 8,
        ..MinimizeParams::default()
    };
    let result = explore_minimize3d(b, grid.clone(), res / 2 - 1, 1, &params)?;
    let candidate = SpheroformCandidate::from_result(&result, res)?;
    let r = result.minimizer.values().map(|v| v + b);
    println!("candidate Φ        {:.10}  (seed {})", result.phi_value, result.restart_seed);
    println!("candidate Φ₁       {:.10}", candidate.phi1()?);
    println!("width residual     {:.2e}", width_residual(&r, &grid, b)?);
    println!("bang-bang violation {:.4}, sign consistency {:.4}", result.bangbang_violation, result.sign_consistency);
    println!("equivalence warning: {}", result.equivalence_warning);
    Ok(())
}
