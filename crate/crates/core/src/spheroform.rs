//! Functionals of three-dimensional bodies of constant width (spheroforms).
//!
//! At d = 3 the admissible set of the variational problem is larger than the
//! set of bodies: a minimizer of `Φ` is only a *candidate*, and its surface
//! area cannot be recovered from `R = R₁ + R₂` alone. Volumes are therefore
//! computed from a caller-supplied surface area.

use std::f64::consts::PI;

use crate::body::{pair_sum_defect, SupportBody};
use crate::error::{invalid, Error, Result};
use crate::harmonic::{GreenMultipliers, GridFn, SpectralCoeffs, SphereGrid};
use crate::variational::{MinimizeParams, OptimizationResult, Problem};

/// `Φ₁[R] = (1/d)⟨G[R], R⟩` for d ∈ {2, 3}.
pub fn phi1(r: &SpectralCoeffs, dim: usize) -> Result<f64> {
    if dim != 2 && dim != 3 {
        return Err(invalid(format!("Φ₁ is only evaluated for d = 2, 3 (got {dim})")));
    }
    if r.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: r.dim(),
        });
    }
    let (order, value) = r.degree_one_max();
    if value.abs() > 1e-12 * r.norm().max(1.0) {
        return Err(Error::ClosednessViolation { order, value });
    }
    let g = GreenMultipliers::new(dim, r.max_degree())?;
    let form: f64 = r
        .modes()
        .filter_map(|(m, v)| g.get(m.degree).map(|gl| gl * v * v))
        .sum();
    Ok(form / dim as f64)
}

/// Curvature sum `R ≡ (d-1)B` of the ball, at band limit `max_degree`.
pub fn ball_curvature(dim: usize, width: f64, max_degree: usize) -> Result<SpectralCoeffs> {
    Ok(SupportBody::ball(dim, width, max_degree)?.curvature_coeffs())
}

/// Blaschke's relation `Vol = BS/2 - πB³/3` for constant width `B` and surface area `S`.
pub fn blaschke_volume(surface: f64, width: f64) -> Result<f64> {
    if !(surface > 0.0 && surface.is_finite()) {
        return Err(invalid(format!("surface area must be positive, got {surface}")));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(invalid(format!("width must be positive, got {width}")));
    }
    Ok(width * (3.0 * surface - 2.0 * PI * width * width) / 6.0)
}

/// `max |R(ω) + R(ω^a) - 2B|` over a sphere grid.
pub fn width_residual(r: &GridFn, grid: &SphereGrid, width: f64) -> Result<f64> {
    if grid.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: grid.dim(),
        });
    }
    if r.len() != grid.len() {
        return Err(invalid(format!(
            "expected {} nodal values, got {}",
            grid.len(),
            r.len()
        )));
    }
    Ok(pair_sum_defect(grid, r, 2.0 * width))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub seed: u64,
    pub resolution: usize,
    pub max_degree: usize,
    pub iterations: usize,
    pub converged: bool,
}

fn green_support(width: f64, rbar: &SpectralCoeffs) -> Result<SupportBody> {
    let g = GreenMultipliers::new(rbar.dim(), rbar.max_degree())?;
    SupportBody::from_deviation(width, &rbar.scale_by_degree(|l| g.get(l).unwrap_or(0.0)))
}

/// A minimizer of `Φ` on S², with no claim that it bounds a convex body.
#[derive(Clone, Debug, PartialEq)]
pub struct SpheroformCandidate {
    pub width: f64,
    /// Spectral `R̄ = R - B`.
    pub rbar: SpectralCoeffs,
    pub provenance: Provenance,
}

impl SpheroformCandidate {
    pub fn from_result(result: &OptimizationResult, resolution: usize) -> Result<Self> {
        if result.minimizer.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: result.minimizer.dim(),
            });
        }
        Ok(Self {
            width: result.minimizer.width(),
            rbar: result.minimizer.coeffs().clone(),
            provenance: Provenance {
                seed: result.restart_seed,
                resolution,
                max_degree: result.minimizer.coeffs().max_degree(),
                iterations: result.iterations,
                converged: result.converged,
            },
        })
    }

    /// Support function `p = B/2 + G[R̄]` of the candidate.
    pub fn support(&self) -> Result<SupportBody> {
        green_support(self.width, &self.rbar)
    }

    /// `Φ₁` of the curvature sum `B + R̄`.
    pub fn phi1(&self) -> Result<f64> {
        let ball = ball_curvature(3, self.width, self.rbar.max_degree())?;
        phi1(&ball.add(&self.rbar)?, 3)
    }
}

/// Minimizes `Φ` on a sphere grid. Results carry `equivalence_warning = true`.
pub fn explore_minimize3d(
    width: f64,
    grid: SphereGrid,
    max_degree: usize,
    seed: u64,
    params: &MinimizeParams,
) -> Result<OptimizationResult> {
    if grid.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: grid.dim(),
        });
    }
    let problem = Problem::new(grid, width, max_degree)?;
    let mut best = problem
        .minimize_restarts(seed, params)?
        .into_iter()
        .next()
        .expect("at least one restart");
    best.equivalence_warning = true;
    Ok(best)
}
