//! Minimizing `Φ[R̄] = ⟨G[R̄], R̄⟩` over the admissible set
//! `H = { f ⊥ Y₁, f(ω^a) = -f(ω), |f| ≤ (d-1)B/2 }`.
//!
//! `R̄` is carried as nodal values on a [`SphereGrid`] together with its
//! spectral form up to a fixed band limit; `Φ` and its gradient `2p̄ = 2G[R̄]`
//! are evaluated spectrally. `Φ` is negative definite on `H`, so the ball
//! (`R̄ = 0`) is its maximum and minimizers sit on the box boundary.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::body::SupportBody;
use crate::error::{invalid, Error, Result};
use crate::harmonic::{project_linear_h, GreenMultipliers, GridFn, SpectralCoeffs, SphereGrid, Transform};

/// Pointwise tolerance on the admissibility invariants, relative to `max(B, 1)`.
pub const ADMISSIBLE_TOLERANCE: f64 = 1e-12;

const MAX_PROJECTION_ITERATIONS: usize = 500;

/// A point of the admissible set `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleR {
    width: f64,
    values: GridFn,
    coeffs: SpectralCoeffs,
}

impl AdmissibleR {
    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn values(&self) -> &GridFn {
        &self.values
    }

    pub fn coeffs(&self) -> &SpectralCoeffs {
        &self.coeffs
    }
}

/// Support function `p = B/2 + G[R̄]` of an admissible `R̄`.
pub fn support_of(r: &AdmissibleR) -> Result<SupportBody> {
    let g = GreenMultipliers::new(r.dim(), r.coeffs.max_degree())?;
    SupportBody::from_deviation(r.width, &r.coeffs.scale_by_degree(|l| g.get(l).unwrap_or(0.0)))
}

/// `Σ_ℓ g_ℓ·c_ℓ²` over degrees `ℓ ≠ 1`.
pub fn phi(r: &AdmissibleR) -> f64 {
    quadratic_form(&r.coeffs)
}

pub(crate) fn quadratic_form(c: &SpectralCoeffs) -> f64 {
    let g = GreenMultipliers::new(c.dim(), c.max_degree()).expect("dimension checked");
    c.modes()
        .filter_map(|(m, v)| g.get(m.degree).map(|gl| gl * v * v))
        .sum()
}

/// Bang-bang diagnostics of a candidate minimizer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BangBangReport {
    /// Measure fraction where `|p̄| > εB` while `R̄` is off the box boundary by more than `εB`.
    pub violation: f64,
    /// Measure fraction where the sign rule `p̄ > εB ⇒ R̄ ≈ -b`, `p̄ < -εB ⇒ R̄ ≈ +b` holds.
    pub sign_consistency: f64,
    pub epsilon: f64,
}

#[derive(Clone, Debug)]
pub struct MinimizeParams {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop once an accepted step lowers `Φ` by less than this fraction.
    pub relative_tolerance: f64,
    /// Random starts use odd degrees in `init_min_degree..=init_max_degree`.
    pub init_min_degree: usize,
    pub init_max_degree: usize,
    /// Cap on the step size as a multiple of the initial step `1/(2|g₃|)`.
    pub max_step_growth: f64,
    pub epsilon: f64,
    /// Worker threads for restarts; `None` reads `ORBIFORM_THREADS`.
    pub threads: Option<usize>,
}

impl Default for MinimizeParams {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iterations: 50_000,
            relative_tolerance: 1e-12,
            init_min_degree: 3,
            init_max_degree: 15,
            max_step_growth: 1024.0,
            epsilon: 1e-3,
            threads: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub minimizer: AdmissibleR,
    pub phi_value: f64,
    /// `πB²/4 + Φ/2`, planar problems only.
    pub area: Option<f64>,
    pub iterations: usize,
    pub restart_seed: u64,
    pub bangbang_violation: f64,
    pub sign_consistency: f64,
    pub converged: bool,
    /// Set for d = 3, where minimizers of `Φ` need not be bodies.
    pub equivalence_warning: bool,
    /// `Φ` after each accepted step, starting with the initial point.
    pub phi_trace: Vec<f64>,
}

/// The discretized problem: a grid, a band limit and the width.
#[derive(Clone, Debug)]
pub struct Problem {
    grid: SphereGrid,
    transform: Transform,
    green: GreenMultipliers,
    width: f64,
}

impl Problem {
    pub fn new(grid: SphereGrid, width: f64, max_degree: usize) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(invalid(format!("width must be positive, got {width}")));
        }
        let transform = Transform::new(&grid, max_degree)?;
        let green = GreenMultipliers::new(grid.dim(), max_degree)?;
        Ok(Self {
            grid,
            transform,
            green,
            width,
        })
    }

    pub fn grid(&self) -> &SphereGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn max_degree(&self) -> usize {
        self.transform.max_degree()
    }

    /// Box half-width `(d-1)B/2`.
    pub fn bound(&self) -> f64 {
        (self.dim() as f64 - 1.0) * self.width / 2.0
    }

    fn tolerance(&self) -> f64 {
        ADMISSIBLE_TOLERANCE * self.bound().max(1.0)
    }

    /// Checks the invariants of `H` and attaches the spectral form.
    pub fn admissible(&self, values: GridFn) -> Result<AdmissibleR> {
        if values.len() != self.grid.len() {
            return Err(invalid(format!(
                "expected {} nodal values, got {}",
                self.grid.len(),
                values.len()
            )));
        }
        let tol = self.tolerance();
        if let Some(v) = values.values().iter().find(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite value {v}")));
        }
        let excess = values.max_abs() - self.bound();
        if excess > tol {
            return Err(invalid(format!("box bound exceeded by {excess:e}")));
        }
        let asym = self.grid.antisymmetry_defect(&values);
        if asym > tol {
            return Err(invalid(format!("antipodal antisymmetry violated by {asym:e}")));
        }
        let norm = self.grid.inner(&values, &values).sqrt();
        for basis in self.grid.degree_one_basis() {
            let c = self.grid.inner(&values, &basis);
            if c.abs() > ADMISSIBLE_TOLERANCE * norm.max(f64::MIN_POSITIVE) && c.abs() > 1e-300 {
                return Err(invalid(format!("degree-1 component {c:e} present")));
            }
        }
        Ok(self.wrap(values))
    }

    fn wrap(&self, values: GridFn) -> AdmissibleR {
        // nodal values are already in H; even and degree-1 coefficients are round-off
        let coeffs = project_linear_h(&self.transform.analyze(&values).expect("grid size checked"));
        AdmissibleR {
            width: self.width,
            values,
            coeffs,
        }
    }

    pub fn zero(&self) -> AdmissibleR {
        self.wrap(GridFn::zeros(self.grid.len()))
    }

    /// `Φ` of an arbitrary nodal function (no admissibility check).
    pub fn phi_of(&self, values: &GridFn) -> Result<f64> {
        Ok(quadratic_form(&self.transform.analyze(values)?))
    }

    /// `p̄ = G[R̄]` at the nodes.
    pub fn deviation(&self, r: &AdmissibleR) -> GridFn {
        let p = r
            .coeffs
            .scale_by_degree(|l| self.green.get(l).unwrap_or(0.0));
        self.transform.synthesize(&p).expect("same band limit")
    }

    /// Gradient `2p̄` of `Φ` with respect to the quadrature inner product.
    pub fn phi_gradient(&self, r: &AdmissibleR) -> GridFn {
        self.deviation(r).map(|v| 2.0 * v)
    }

    fn clip(&self, f: &GridFn) -> GridFn {
        let b = self.bound();
        f.map(|v| v.clamp(-b, b))
    }

    /// Nearest point of `H` to `f` in the quadrature norm.
    ///
    /// The box and the degree-1 constraint are both invariant under
    /// `f ↦ -f∘a`, so the projection of `f` is that of its antisymmetric part
    /// `g`. The remaining problem has the form `x = clip(g - Σ λⱼ eⱼ)` with one
    /// multiplier per degree-1 harmonic `eⱼ`, and `λ` maximizes the concave
    /// dual; it is found by a damped semismooth Newton iteration.
    pub fn project_admissible(&self, f: &GridFn) -> Result<AdmissibleR> {
        if f.len() != self.grid.len() {
            return Err(invalid(format!(
                "expected {} nodal values, got {}",
                self.grid.len(),
                f.len()
            )));
        }
        let g = self.grid.antisymmetric_part(f);
        let basis = self.grid.degree_one_basis();
        let w = self.grid.weights();
        let b = self.bound();
        let k = basis.len();
        let shifted = |lambda: &[f64]| -> Vec<f64> {
            let mut v = g.values().to_vec();
            for (e, l) in basis.iter().zip(lambda) {
                for (vi, ei) in v.iter_mut().zip(e.values()) {
                    *vi -= l * ei;
                }
            }
            v
        };
        let dual = |lambda: &[f64]| -> (f64, Vec<f64>) {
            let z = shifted(lambda);
            let mut value = 0.0;
            let mut grad = vec![0.0; k];
            for (i, &zi) in z.iter().enumerate() {
                let x = zi.clamp(-b, b);
                let shift = g.values()[i] - zi;
                value += w[i] * (0.5 * (x - g.values()[i]).powi(2) + x * shift);
                for j in 0..k {
                    grad[j] += w[i] * x * basis[j].values()[i];
                }
            }
            (value, grad)
        };
        let scale = self.grid.inner(&g, &g).sqrt().max(b * self.grid.total_measure().sqrt());
        let target = 1e-14 * scale;
        let norm = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut lambda = vec![0.0; k];
        let (mut value, mut grad) = dual(&lambda);
        let mut radius = g.max_abs().max(b);
        for _ in 0..MAX_PROJECTION_ITERATIONS {
            if grad.iter().all(|r| r.abs() <= target) {
                let x = self.clip(&GridFn::new(shifted(&lambda)));
                return Ok(self.wrap(self.grid.antisymmetric_part(&x)));
            }
            // generalized Hessian of the negated dual over the unclipped nodes
            let z = shifted(&lambda);
            let mut h = vec![vec![0.0; k]; k];
            for (i, &zi) in z.iter().enumerate() {
                if zi.abs() < b {
                    for (a, row) in h.iter_mut().enumerate() {
                        for (c, hac) in row.iter_mut().enumerate() {
                            *hac += w[i] * basis[a].values()[i] * basis[c].values()[i];
                        }
                    }
                }
            }
            let trace: f64 = (0..k).map(|a| h[a][a]).sum();
            let ridge = 1e-12 * trace.max(w.iter().copied().fold(0.0, f64::max));
            for (a, row) in h.iter_mut().enumerate() {
                row[a] += ridge;
            }
            // the Hessian is near-singular when few nodes are unclipped, so the
            // Newton step is capped by a trust radius that grows on full steps
            let mut step = solve_symmetric(h, &grad);
            let length = norm(&step);
            if length > radius {
                step.iter_mut().for_each(|s| *s *= radius / length);
            }
            let slope: f64 = step.iter().zip(&grad).map(|(s, r)| s * r).sum();
            let mut t = 1.0;
            loop {
                let trial: Vec<f64> = lambda.iter().zip(&step).map(|(l, s)| l + t * s).collect();
                let (v, gr) = dual(&trial);
                // near convergence the dual value stalls at round-off; the residual does not
                let ascent = v >= value + 1e-4 * t * slope;
                let flat = (v - value).abs() <= 1e-13 * (value.abs() + scale * scale);
                let shrink = flat && norm(&gr) <= (1.0 - 1e-4 * t) * norm(&grad);
                if ascent || shrink || t < 1e-30 {
                    lambda = trial;
                    value = v;
                    grad = gr;
                    break;
                }
                t /= 2.0;
            }
            radius = if t == 1.0 {
                radius.max(2.0 * length.min(radius))
            } else {
                (t * length.min(radius)).max(f64::MIN_POSITIVE)
            };
        }
        Err(Error::NumericalFailure(format!(
            "projection onto the admissible set did not converge in {MAX_PROJECTION_ITERATIONS} iterations"
        )))
    }

    pub fn bang_bang_report(&self, r: &AdmissibleR, epsilon: f64) -> BangBangReport {
        let p = self.deviation(r);
        let b = self.bound();
        let band = epsilon * self.width;
        let total = self.grid.total_measure();
        let (mut bad, mut consistent) = (0.0, 0.0);
        for ((w, &pv), &rv) in self
            .grid
            .weights()
            .iter()
            .zip(p.values())
            .zip(r.values.values())
        {
            if pv.abs() > band && rv.abs() < b - band {
                bad += w;
            }
            let ok = if pv > band {
                (rv + b).abs() <= band
            } else if pv < -band {
                (rv - b).abs() <= band
            } else {
                true
            };
            if ok {
                consistent += w;
            }
        }
        BangBangReport {
            violation: bad / total,
            sign_consistency: consistent / total,
            epsilon,
        }
    }

    /// Rotates a planar `R̄` by whole grid steps so that the maximum of `p̄`
    /// lands on the node at ω = 0. Near-ties (within `1e-12` relative) go to
    /// the smallest shift.
    pub fn canonical_align(&self, r: &AdmissibleR) -> Result<AdmissibleR> {
        if self.dim() != 2 {
            return Err(invalid("canonical alignment is defined for planar problems only"));
        }
        let p = self.deviation(r);
        let pv = p.values();
        if p.max_abs() == 0.0 {
            return Ok(r.clone());
        }
        let max = pv.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let cutoff = max - 1e-12 * max.abs();
        let shift = pv.iter().position(|&v| v >= cutoff).unwrap_or(0);
        if shift == 0 {
            return Ok(r.clone());
        }
        let n = pv.len();
        let rv = r.values.values();
        let rotated = GridFn::new((0..n).map(|i| rv[(i + shift) % n]).collect());
        Ok(self.wrap(rotated))
    }

    /// A random admissible start: uniform odd-degree coefficients, projected.
    pub fn random_start(&self, seed: u64, params: &MinimizeParams) -> Result<AdmissibleR> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let top = params.init_max_degree.min(self.max_degree());
        let mut c = SpectralCoeffs::zeros(self.dim(), self.max_degree())?;
        let lo = params.init_min_degree.max(3) | 1;
        let scale = self.bound() * (PI).sqrt();
        let orders: Vec<_> = c
            .modes()
            .filter(|(m, _)| m.degree >= lo && m.degree <= top && m.degree % 2 == 1)
            .map(|(m, _)| m)
            .collect();
        for m in orders {
            c.set(m.degree, m.order, rng.gen_range(-1.0..1.0) * scale)?;
        }
        let f = self.transform.synthesize(&c)?;
        self.project_admissible(&f)
    }

    /// Projected-gradient descent from `start` with step doubling on success and
    /// halving on failure.
    pub fn descend(
        &self,
        start: AdmissibleR,
        params: &MinimizeParams,
        seed: u64,
    ) -> Result<OptimizationResult> {
        let g3 = self.green.get(3).ok_or_else(|| {
            invalid("band limit must reach degree 3 for the admissible set to be nontrivial")
        })?;
        let eta0 = 1.0 / (2.0 * g3.abs());
        let eta_max = eta0 * params.max_step_growth;
        let eta_min = eta0 * 2f64.powi(-40);
        let mut eta = eta0;
        let mut x = start;
        let mut phi_x = phi(&x);
        let mut trace = vec![phi_x];
        let mut iterations = 0;
        let mut converged = false;
        'outer: while iterations < params.max_iterations {
            let grad = self.phi_gradient(&x);
            if grad.max_abs() <= 1e-14 * self.width {
                converged = true;
                break;
            }
            let (trial, phi_t) = loop {
                let trial = self.project_admissible(&x.values.axpy(-eta, &grad))?;
                let phi_t = phi(&trial);
                if phi_t <= phi_x {
                    break (trial, phi_t);
                }
                eta /= 2.0;
                if eta < eta_min {
                    converged = true;
                    break 'outer;
                }
            };
            iterations += 1;
            let decrease = phi_x - phi_t;
            let scale = phi_x.abs();
            x = trial;
            phi_x = phi_t;
            trace.push(phi_x);
            eta = (2.0 * eta).min(eta_max);
            if decrease <= params.relative_tolerance * scale {
                converged = true;
                break;
            }
        }
        Ok(self.finish(x, phi_x, iterations, seed, converged, trace, params.epsilon))
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        &self,
        x: AdmissibleR,
        phi_value: f64,
        iterations: usize,
        seed: u64,
        converged: bool,
        phi_trace: Vec<f64>,
        epsilon: f64,
    ) -> OptimizationResult {
        let report = self.bang_bang_report(&x, epsilon);
        let area = (self.dim() == 2).then(|| PI * self.width * self.width / 4.0 + phi_value / 2.0);
        OptimizationResult {
            minimizer: x,
            phi_value,
            area,
            iterations,
            restart_seed: seed,
            bangbang_violation: report.violation,
            sign_consistency: report.sign_consistency,
            converged,
            equivalence_warning: self.dim() == 3,
            phi_trace,
        }
    }

    /// Runs every restart and returns the results sorted by `Φ` (best first,
    /// ties broken by seed).
    pub fn minimize_restarts(
        &self,
        seed: u64,
        params: &MinimizeParams,
    ) -> Result<Vec<OptimizationResult>> {
        if params.restarts == 0 {
            return Err(invalid("at least one restart is required"));
        }
        let seeds: Vec<u64> = (0..params.restarts as u64).map(|k| seed.wrapping_add(k)).collect();
        let run = || -> Result<Vec<OptimizationResult>> {
            seeds
                .par_iter()
                .map(|&s| {
                    let start = self.random_start(s, params)?;
                    self.descend(start, params, s)
                })
                .collect()
        };
        let mut results = match thread_count(params) {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::NumericalFailure(e.to_string()))?
                .install(run)?,
            None => run()?,
        };
        results.sort_by(|a, b| {
            a.phi_value
                .total_cmp(&b.phi_value)
                .then(a.restart_seed.cmp(&b.restart_seed))
        });
        Ok(results)
    }
}

fn thread_count(params: &MinimizeParams) -> Option<usize> {
    params.threads.or_else(|| {
        std::env::var("ORBIFORM_THREADS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&n: &usize| n > 0)
    })
}

/// Best of `params.restarts` seeded descents.
pub fn minimize(
    width: f64,
    grid: SphereGrid,
    max_degree: usize,
    seed: u64,
    params: &MinimizeParams,
) -> Result<OptimizationResult> {
    let problem = Problem::new(grid, width, max_degree)?;
    Ok(problem
        .minimize_restarts(seed, params)?
        .into_iter()
        .next()
        .expect("at least one restart"))
}

/// Solves `h·x = r` for a small symmetric positive definite `h` (Cholesky).
fn solve_symmetric(mut h: Vec<Vec<f64>>, r: &[f64]) -> Vec<f64> {
    let n = r.len();
    for j in 0..n {
        for k in 0..j {
            let hjk = h[j][k];
            for i in j..n {
                h[i][j] -= h[i][k] * hjk;
            }
        }
        let d = h[j][j].sqrt();
        for i in j..n {
            h[i][j] /= d;
        }
    }
    let mut y = r.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= h[i][k] * y[k];
        }
        y[i] /= h[i][i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= h[k][i] * y[k];
        }
        y[i] /= h[i][i];
    }
    y
}
