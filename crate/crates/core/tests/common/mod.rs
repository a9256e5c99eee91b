#![allow(dead_code)]

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Reuleaux polygon area by decomposition into the inscribed regular polygon
/// and `n` circular segments of radius `B` and angle `π/n`.
pub fn arc_sector_area(n: usize, b: f64) -> f64 {
    let nf = n as f64;
    let circumradius = b / (2.0 * (PI / (2.0 * nf)).cos());
    let polygon = 0.5 * nf * circumradius * circumradius * (2.0 * PI / nf).sin();
    let segment = 0.5 * b * b * (PI / nf - (PI / nf).sin());
    polygon + nf * segment
}

pub fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
