//! Reuleaux polygons: closed-form areas against spectral quadrature and the
//! reconstructed boundary.
//!
//! `cargo run --release --example reuleaux_polygons`

use orbiform::body::{area_quadrature, area_shoelace, validate, ValidationOptions};
use orbiform::harmonic::make_grid;
use orbiform::reuleaux::{closed_area, to_body, ReuleauxSpec};

fn main() -> orbiform::Result<()> {
    let modes = 1024;
    let grid = make_grid(2, 4 * (modes + 1))?;
    println!("{:>3} {:>14} {:>14} {:>14}", "n", "closed form", "quadrature", "shoelace");
    for n in [3, 5, 7, 9, 11] {
        let spec = ReuleauxSpec::new(n, 1.0)?;
        let body = to_body(&spec, modes)?;
        println!(
            "{n:>3} {:>14.10} {:>14.10} {:>14.10}",
            closed_area(&spec),
            area_quadrature(&body, &grid)?,
            area_shoelace(&body, 4096)
        );
    }

    // truncation leaves Gibbs ripples in R at the corners
    let body = to_body(&ReuleauxSpec::new(3, 1.0)?, modes)?;
    print!("{}", validate(&body, &ValidationOptions::truncated())?);
    Ok(())
}
