//! The reduced resolvent `G = (∇² + (d-1))⁻¹` on the degree-1-free subspace.
//!
//! `cargo run --example green_operator`

use orbiform::harmonic::{apply_green, laplacian, GreenMultipliers, SpectralCoeffs};
use orbiform::sample::random_h1;
use orbiform::Error;
use rand::SeedableRng;

fn main() -> orbiform::Result<()> {
    for dim in [2, 3] {
        let g = GreenMultipliers::new(dim, 6)?;
        let multipliers: Vec<String> = (0..=6)
            .map(|l| g.get(l).map_or("undefined".to_string(), |v| format!("{v:.4}")))
            .collect();
        println!("d = {dim}: g_l = [{}]", multipliers.join(", "));

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(dim as u64);
        let f = random_h1(&mut rng, dim, 20);
        let gf = apply_green(&f)?;
        let back = laplacian(&gf).add(&gf.scaled(dim as f64 - 1.0))?;
        println!("  residual |(∇² + d - 1) G f - f| / |f| = {:.2e}", back.sub(&f)?.norm() / f.norm());
    }

    let mut translation = SpectralCoeffs::zeros(2, 3)?;
    translation.set(1, 1, 0.5)?;
    match apply_green(&translation) {
        Err(Error::PreconditionViolation(msg)) => println!("degree-1 input rejected: {msg}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
