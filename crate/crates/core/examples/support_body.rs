//! A smooth orbiform from Fourier amplitudes: invariants, area three ways and
//! rigid motions.
//!
//! `cargo run --example support_body`

use orbiform::body::{
    area_quadrature, area_shoelace, area_spectral, boundary, perimeter, planar_from_amplitudes,
    validate, width_defect, ValidationOptions,
};
use orbiform::harmonic::make_grid;

fn main() -> orbiform::Result<()> {
    // p(ω) = 1 + 0.02 cos 3ω - 0.01 sin 5ω, width 2
    let body = planar_from_amplitudes(2.0, 8, &[(3, 0.02, 0.0), (5, 0.0, -0.01)])?;
    let grid = make_grid(2, 64)?;

    print!("{}", validate(&body, &ValidationOptions::default())?);
    println!("width defect  {:.2e}", width_defect(&body, &grid)?);
    println!("perimeter     {:.12}  (π·B = {:.12})", perimeter(&body, &grid)?, std::f64::consts::PI * 2.0);
    println!("area spectral {:.12}", area_spectral(&body)?);
    println!("area nodal    {:.12}", area_quadrature(&body, &grid)?);
    println!("area shoelace {:.12}", area_shoelace(&body, 2048));

    let moved = body.rotated(0.7)?.translated(3.0, -1.0)?;
    println!("area after rigid motion {:.12}", area_spectral(&moved)?);
    let curve = boundary(&moved.centered(), &grid)?;
    let (lo, hi) = curve.bounding_box();
    println!("centered bounding box [{:.4}, {:.4}] x [{:.4}, {:.4}]", lo[0], hi[0], lo[1], hi[1]);
    Ok(())
}
