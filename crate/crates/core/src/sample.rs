//! Random constant-width bodies and harmonic coefficients, for experiments
//! and property tests.

use rand::Rng;

use crate::body::{planar_from_amplitudes, SupportBody};
use crate::harmonic::{Mode, SpectralCoeffs};

/// A random planar body of constant width with `R ≥ 0.05·B`.
///
/// Odd amplitudes of degree 3..=15 are scaled so that
/// `Σ (k²-1)(|aₖ| + |bₖ|) ≤ 0.45·B`, which bounds `|R - B/2|`; the body is
/// also translated by a random degree-1 term.
pub fn random_orbiform<R: Rng>(rng: &mut R, max_degree: usize) -> SupportBody {
    let width = rng.gen_range(0.5..3.0);
    let mut terms = Vec::new();
    let mut total = 0.0;
    for k in (3..=15.min(max_degree)).step_by(2) {
        let (a, b): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        total += (k * k - 1) as f64 * (a.abs() + b.abs());
        terms.push((k, a, b));
    }
    let scale = if total > 0.0 {
        0.45 * width * rng.gen_range(0.05..1.0) / total
    } else {
        0.0
    };
    let mut terms: Vec<_> = terms
        .into_iter()
        .map(|(k, a, b)| (k, a * scale, b * scale))
        .collect();
    if max_degree >= 1 {
        terms.push((1, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    planar_from_amplitudes(width, max_degree, &terms).expect("degrees within band limit")
}

/// Random coefficients with the degree-1 part removed, decaying like `1/(1+ℓ)`.
pub fn random_h1<R: Rng>(rng: &mut R, dim: usize, max_degree: usize) -> SpectralCoeffs {
    fill(rng, dim, max_degree, |m| m.degree != 1, |m| 1.0 / (1.0 + m.degree as f64))
}

/// Random coefficients on odd degrees ≥ 3, uniform in `[-amplitude, amplitude)`.
pub fn random_odd<R: Rng>(rng: &mut R, dim: usize, max_degree: usize, amplitude: f64) -> SpectralCoeffs {
    fill(rng, dim, max_degree, |m| m.degree >= 3 && m.degree % 2 == 1, |_| amplitude)
}

fn fill<R: Rng>(
    rng: &mut R,
    dim: usize,
    max_degree: usize,
    keep: impl Fn(Mode) -> bool,
    scale: impl Fn(Mode) -> f64,
) -> SpectralCoeffs {
    let mut c = SpectralCoeffs::zeros(dim, max_degree).expect("supported dimension");
    let modes: Vec<Mode> = c.modes().map(|(m, _)| m).filter(|&m| keep(m)).collect();
    for m in modes {
        let v = scale(m) * rng.gen_range(-1.0..1.0);
        c.set(m.degree, m.order, v).expect("mode in range");
    }
    c
}
