//! Bodies of constant width through their support functions.
//!
//! A convex body is stored as the spectral expansion of its support function
//! `p` on the unit sphere (the circle when d = 2). Constant width `B` means
//! `p(ω) + p(-ω) = B`, so `p = B/2 + p̄` with `p̄` odd. The radius of curvature
//! `R = p″ + p` (a sum of principal radii when d = 3) is derived on demand, and
//! the area becomes a quadratic form in `R` through the reduced resolvent
//! `G = (∇² + d - 1)⁻¹` on the degree-1-free subspace.
//!
//! Modules:
//!
//! - [`harmonic`]: bases, quadrature grids, transforms and the Green multipliers.
//! - [`body`]: planar support bodies, boundary reconstruction, areas and validation.
//! - [`reuleaux`]: exact odd Reuleaux polygons and their closed-form areas.
//! - [`variational`]: projected-gradient minimization of `Φ[R̄] = ⟨G[R̄], R̄⟩`.
//! - [`spheroform`]: the d = 3 functionals and exploratory minimization.
//! - [`shape`]: JSON shape files and optimization records.
//! - [`cli`]: the `orbiform` command line.
//! - [`sample`]: random bodies and coefficients.
//!
//! Runnable examples live in `examples/`:
//!
//! | example | shows |
//! |---|---|
//! | `reuleaux_polygons` | closed-form, quadrature and shoelace areas of Reuleaux polygons |
//! | `green_operator` | multipliers of `G`, its residual, and the degree-1 precondition |
//! | `support_body` | invariants, perimeter and area of a smooth orbiform |
//! | `optimize_orbiform` | restarts of the minimizer converging to the Reuleaux triangle |
//! | `spheroform` | `Φ₁`, Blaschke's volume relation and a d = 3 candidate |
//! | `area_table` | the increasing table of Reuleaux areas |
//! | `shape_files` | JSON input and output and SVG rendering |

pub mod body;
pub mod cli;
pub mod error;
pub mod harmonic;
pub mod reuleaux;
pub mod sample;
pub mod shape;
pub mod spheroform;
pub mod variational;

pub use error::{Error, Result};

#[cfg(test)]
mod properties;
