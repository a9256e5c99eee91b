//! Constant-width bodies stored by their support function.
//!
//! The support function `p` is kept as [`SpectralCoeffs`]; the radius of
//! curvature `R = ∇²p + (d-1)p` (on S¹, `R = p″ + p`) is always derived from it.
//! Planar geometry (boundary, area, perimeter) lives here; the dimension-generic
//! validator also accepts d = 3 candidates.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::harmonic::{
    make_grid, GreenMultipliers, GridFn, Mode, SpectralCoeffs, SphereGrid, Transform,
};

/// Convexity slack (relative to the width) for exactly band-limited bodies.
pub const STRICT_CONVEXITY_TOLERANCE: f64 = 1e-9;

/// Convexity slack that admits plainly truncated Fourier series of bodies with
/// corners. The partial sums of a unit jump overshoot by
/// `Si(π)/π - 1/2 ≈ 0.0895` regardless of the band limit.
pub const GIBBS_CONVEXITY_TOLERANCE: f64 = 0.09;

const SPECTRAL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SupportBody {
    width: f64,
    coeffs: SpectralCoeffs,
}

impl SupportBody {
    /// Wraps a support function. No geometric invariant is enforced here; see
    /// [`validate`].
    pub fn new(width: f64, coeffs: SpectralCoeffs) -> Result<Self> {
        if !width.is_finite() {
            return Err(invalid("width must be finite"));
        }
        Ok(Self { width, coeffs })
    }

    /// The ball of diameter `width`, carried at band limit `max_degree`.
    pub fn ball(dim: usize, width: f64, max_degree: usize) -> Result<Self> {
        let mut coeffs = SpectralCoeffs::zeros(dim, max_degree)?;
        coeffs.set(0, 0, mean_to_coefficient(dim, width / 2.0))?;
        Self::new(width, coeffs)
    }

    /// `p = B/2 + p̄`; any degree-0 part of `deviation` is replaced.
    pub fn from_deviation(width: f64, deviation: &SpectralCoeffs) -> Result<Self> {
        let mut coeffs = deviation.clone();
        coeffs.set(0, 0, mean_to_coefficient(deviation.dim(), width / 2.0))?;
        Self::new(width, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.dim()
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.max_degree()
    }

    pub fn coeffs(&self) -> &SpectralCoeffs {
        &self.coeffs
    }

    /// Radius of curvature (the sum of principal radii when d = 3).
    pub fn curvature_coeffs(&self) -> SpectralCoeffs {
        let d = self.dim() as f64;
        self.coeffs.scale_by_degree(|l| {
            let l = l as f64;
            (d - 1.0) - l * (l + d - 2.0)
        })
    }

    /// `p̄ = p - B/2`.
    pub fn deviation(&self) -> SpectralCoeffs {
        let mut c = self.coeffs.clone();
        let mean = c.get(0, 0) - mean_to_coefficient(self.dim(), self.width / 2.0);
        c.set(0, 0, mean).expect("degree 0 always present");
        c
    }

    /// `R̄ = R - (d-1)B/2`.
    pub fn curvature_deviation(&self) -> SpectralCoeffs {
        let mut c = self.curvature_coeffs();
        let b = (self.dim() as f64 - 1.0) * self.width / 2.0;
        let v = c.get(0, 0) - mean_to_coefficient(self.dim(), b);
        c.set(0, 0, v).expect("degree 0 always present");
        c
    }

    /// Mean of the support function over the sphere.
    pub fn mean_support(&self) -> f64 {
        coefficient_to_mean(self.dim(), self.coeffs.get(0, 0))
    }

    /// Rigid translation by `(dx, dy)` (planar bodies).
    pub fn translated(&self, dx: f64, dy: f64) -> Result<Self> {
        self.require_planar()?;
        let mut c = self.coeffs.clone();
        if c.max_degree() == 0 {
            c = c.with_max_degree(1);
        }
        let s = PI.sqrt();
        c.set(1, 1, c.get(1, 1) + dx * s)?;
        c.set(1, -1, c.get(1, -1) + dy * s)?;
        Self::new(self.width, c)
    }

    /// Rotation by `theta` counter-clockwise (planar bodies).
    pub fn rotated(&self, theta: f64) -> Result<Self> {
        self.require_planar()?;
        let mut c = self.coeffs.clone();
        for k in 1..=c.max_degree() {
            let (a, b) = (c.get(k, k as i64), c.get(k, -(k as i64)));
            let (s, co) = (k as f64 * theta).sin_cos();
            c.set(k, k as i64, a * co - b * s)?;
            c.set(k, -(k as i64), a * s + b * co)?;
        }
        Self::new(self.width, c)
    }

    /// Drops the degree-1 part of `p`, moving the Steiner point to the origin.
    pub fn centered(&self) -> Self {
        let mut c = self.coeffs.clone();
        let orders: Vec<i64> = c.degree_coeffs(1).map(|(m, _)| m.order).collect();
        for o in orders {
            c.set(1, o, 0.0).expect("degree-1 mode exists");
        }
        Self {
            width: self.width,
            coeffs: c,
        }
    }

    fn require_planar(&self) -> Result<()> {
        if self.dim() == 2 {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            })
        }
    }
}

fn sphere_measure(dim: usize) -> f64 {
    if dim == 2 {
        2.0 * PI
    } else {
        4.0 * PI
    }
}

/// Degree-0 coefficient of the constant function `mean`.
pub(crate) fn mean_to_coefficient(dim: usize, mean: f64) -> f64 {
    mean * sphere_measure(dim).sqrt()
}

pub(crate) fn coefficient_to_mean(dim: usize, c0: f64) -> f64 {
    c0 / sphere_measure(dim).sqrt()
}

/// Sampled boundary `x(ω) = p(ω)·ω + p′(ω)·ω⊥`; the last sample repeats ω = 2π.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCurve {
    pub angles: Vec<f64>,
    pub points: Vec<[f64; 2]>,
}

impl BoundaryCurve {
    pub fn closure_error(&self) -> f64 {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt(),
            _ => 0.0,
        }
    }

    /// Shoelace area of the closed polygon through the samples.
    pub fn polygon_area(&self) -> f64 {
        let n = self.points.len();
        let mut s = 0.0;
        for i in 0..n.saturating_sub(1) {
            let (a, b) = (self.points[i], self.points[i + 1]);
            s += a[0] * b[1] - b[0] * a[1];
        }
        0.5 * s
    }

    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &self.points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }
}

/// Evaluates a planar expansion and its first two derivatives at `omega`.
fn eval_circle(c: &SpectralCoeffs, omega: f64) -> (f64, f64, f64) {
    let mut v = c.get(0, 0) / (2.0 * PI).sqrt();
    let (mut d1, mut d2) = (0.0, 0.0);
    let s = 1.0 / PI.sqrt();
    for k in 1..=c.max_degree() {
        let kf = k as f64;
        let (a, b) = (c.get(k, k as i64) * s, c.get(k, -(k as i64)) * s);
        let (sn, cs) = (kf * omega).sin_cos();
        v += a * cs + b * sn;
        d1 += kf * (b * cs - a * sn);
        d2 -= kf * kf * (a * cs + b * sn);
    }
    (v, d1, d2)
}

/// `p(ω)` for a planar body.
pub fn eval_support(body: &SupportBody, omega: f64) -> f64 {
    eval_circle(body.coeffs(), omega).0
}

/// `p′(ω)` for a planar body.
pub fn eval_support_derivative(body: &SupportBody, omega: f64) -> f64 {
    eval_circle(body.coeffs(), omega).1
}

/// `R(ω) = p″(ω) + p(ω)` for a planar body.
pub fn eval_curvature_radius(body: &SupportBody, omega: f64) -> f64 {
    let (p, _, p2) = eval_circle(body.coeffs(), omega);
    p2 + p
}

/// Boundary sampled at every node of a planar grid, closed at ω = 2π.
pub fn boundary(body: &SupportBody, grid: &SphereGrid) -> Result<BoundaryCurve> {
    body.require_planar()?;
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: grid.dim(),
        });
    }
    let mut angles: Vec<f64> = grid.nodes().iter().map(|n| n.phi).collect();
    angles.push(2.0 * PI);
    Ok(boundary_at(body, angles))
}

/// Boundary at `samples` equally spaced angles plus the closing sample.
pub fn boundary_samples(body: &SupportBody, samples: usize) -> BoundaryCurve {
    let angles = (0..=samples)
        .map(|i| 2.0 * PI * i as f64 / samples as f64)
        .collect();
    boundary_at(body, angles)
}

fn boundary_at(body: &SupportBody, angles: Vec<f64>) -> BoundaryCurve {
    let points = angles
        .iter()
        .map(|&w| {
            let (p, dp, _) = eval_circle(body.coeffs(), w);
            let (s, c) = w.sin_cos();
            [p * c - dp * s, p * s + dp * c]
        })
        .collect();
    BoundaryCurve { angles, points }
}

fn planar_transform(body: &SupportBody, grid: &SphereGrid) -> Result<Transform> {
    body.require_planar()?;
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: grid.dim(),
        });
    }
    Transform::new(grid, body.max_degree())
}

/// `½ Σ wᵢ p(ωᵢ) R(ωᵢ)`.
pub fn area_quadrature(body: &SupportBody, grid: &SphereGrid) -> Result<f64> {
    let t = planar_transform(body, grid)?;
    let p = t.synthesize(body.coeffs())?;
    let r = t.synthesize(&body.curvature_coeffs())?;
    Ok(0.5 * grid.inner(&p, &r))
}

/// `½⟨G[R], R⟩` for a radius-of-curvature expansion on S¹.
pub fn area_from_curvature(r: &SpectralCoeffs) -> Result<f64> {
    if r.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: r.dim(),
        });
    }
    let (order, value) = r.degree_one_max();
    if value.abs() > SPECTRAL_TOLERANCE * r.norm().max(1.0) {
        return Err(Error::ClosednessViolation { order, value });
    }
    let g = GreenMultipliers::new(2, r.max_degree())?;
    Ok(0.5
        * r.modes()
            .filter(|(m, _)| m.degree != 1)
            .map(|(m, v)| g.get(m.degree).unwrap() * v * v)
            .sum::<f64>())
}

/// Area as the quadratic form `½⟨G[R], R⟩`.
pub fn area_spectral(body: &SupportBody) -> Result<f64> {
    body.require_planar()?;
    area_from_curvature(&body.curvature_coeffs())
}

/// `Σ wᵢ R(ωᵢ)`, which is πB for every planar constant-width body.
pub fn perimeter(body: &SupportBody, grid: &SphereGrid) -> Result<f64> {
    let t = planar_transform(body, grid)?;
    Ok(grid.integrate(&t.synthesize(&body.curvature_coeffs())?))
}

/// Area enclosed by the reconstructed boundary: polygon areas at `samples` and
/// `2·samples` points, Richardson-extrapolated to remove the `O(1/N²)` term.
pub fn area_shoelace(body: &SupportBody, samples: usize) -> f64 {
    let coarse = boundary_samples(body, samples).polygon_area();
    let fine = boundary_samples(body, 2 * samples).polygon_area();
    (4.0 * fine - coarse) / 3.0
}

#[derive(Clone, Debug)]
pub struct ValidationOptions {
    /// Allowed dip of `R` below zero, relative to the width.
    pub convexity_tolerance: f64,
    /// Also require the degree-1 part of `p` to vanish.
    pub canonical: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            convexity_tolerance: STRICT_CONVEXITY_TOLERANCE,
            canonical: false,
        }
    }
}

impl ValidationOptions {
    /// Admits Gibbs oscillation of truncated bodies with corners.
    pub fn truncated() -> Self {
        Self {
            convexity_tolerance: GIBBS_CONVEXITY_TOLERANCE,
            canonical: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<20} {}  residual {:.3e}  tolerance {:.3e}",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.residual,
                c.tolerance
            )?;
        }
        Ok(())
    }
}

/// Grid fine enough to sample `R` for the pointwise checks.
fn validation_grid(body: &SupportBody) -> Result<SphereGrid> {
    let l = body.max_degree();
    let res = match body.dim() {
        2 => (4 * (l + 1)).max(64),
        _ => (2 * l + 4).max(16),
    };
    make_grid(body.dim(), res + res % 2)
}

/// Checks every constant-width body invariant and reports residuals.
///
/// Checks, in order: `positive-width`, `constant-width` (no even degree ≥ 2),
/// `mean-width` (mean of `p` is B/2), `convexity` (`R ≥ 0`), `curvature-bound`
/// (`R ≤ (d-1)B`), `closedness` (degree-1 part of `R` vanishes) and, when
/// requested, `canonical-centroid`.
pub fn validate(body: &SupportBody, options: &ValidationOptions) -> Result<ValidationReport> {
    let b = body.width();
    let scale = b.abs().max(f64::MIN_POSITIVE);
    let d = body.dim();
    let mut checks = Vec::new();

    checks.push(Check {
        name: "positive-width",
        passed: b > 0.0,
        residual: if b > 0.0 { 0.0 } else { -b },
        tolerance: 0.0,
    });

    let even = body
        .coeffs()
        .modes()
        .filter(|(m, _)| m.degree >= 2 && m.degree % 2 == 0)
        .fold(0.0f64, |acc, (_, v)| acc.max(v.abs()));
    checks.push(Check {
        name: "constant-width",
        passed: even <= SPECTRAL_TOLERANCE * scale,
        residual: even,
        tolerance: SPECTRAL_TOLERANCE * scale,
    });

    let mean_err = (body.mean_support() - b / 2.0).abs();
    checks.push(Check {
        name: "mean-width",
        passed: mean_err <= SPECTRAL_TOLERANCE * scale,
        residual: mean_err,
        tolerance: SPECTRAL_TOLERANCE * scale,
    });

    let grid = validation_grid(body)?;
    let t = Transform::new(&grid, body.max_degree())?;
    let r = t.synthesize(&body.curvature_coeffs())?;
    let r_min = r.values().iter().copied().fold(f64::INFINITY, f64::min);
    let r_max = r.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = options.convexity_tolerance * scale;
    checks.push(Check {
        name: "convexity",
        passed: r_min >= -slack,
        residual: (-r_min).max(0.0),
        tolerance: slack,
    });
    let upper = (d as f64 - 1.0) * b;
    checks.push(Check {
        name: "curvature-bound",
        passed: r_max <= upper + slack,
        residual: (r_max - upper).max(0.0),
        tolerance: slack,
    });

    let (_, r1) = body.curvature_coeffs().degree_one_max();
    checks.push(Check {
        name: "closedness",
        passed: r1.abs() <= SPECTRAL_TOLERANCE * scale,
        residual: r1.abs(),
        tolerance: SPECTRAL_TOLERANCE * scale,
    });

    if options.canonical {
        let (_, p1) = body.coeffs().degree_one_max();
        checks.push(Check {
            name: "canonical-centroid",
            passed: p1.abs() <= SPECTRAL_TOLERANCE * scale,
            residual: p1.abs(),
            tolerance: SPECTRAL_TOLERANCE * scale,
        });
    }

    Ok(ValidationReport { checks })
}

/// Sum of `p(ω) + p(ω^a) - B` magnitudes: largest deviation over the grid.
pub fn width_defect(body: &SupportBody, grid: &SphereGrid) -> Result<f64> {
    let t = Transform::new(grid, body.max_degree())?;
    let p = t.synthesize(body.coeffs())?;
    Ok(pair_sum_defect(grid, &p, body.width()))
}

/// Largest `|R(ω) + R(ω^a) - (d-1)B|` over the grid.
pub fn curvature_pair_defect(body: &SupportBody, grid: &SphereGrid) -> Result<f64> {
    let t = Transform::new(grid, body.max_degree())?;
    let r = t.synthesize(&body.curvature_coeffs())?;
    Ok(pair_sum_defect(grid, &r, (body.dim() as f64 - 1.0) * body.width()))
}

pub(crate) fn pair_sum_defect(grid: &SphereGrid, f: &GridFn, target: f64) -> f64 {
    let v = f.values();
    grid.antipode()
        .iter()
        .enumerate()
        .map(|(i, &a)| (v[i] + v[a] - target).abs())
        .fold(0.0, f64::max)
}

/// A planar body from Fourier amplitudes `p̄(ω) = Σ aₖ cos kω + bₖ sin kω`.
pub fn planar_from_amplitudes(
    width: f64,
    max_degree: usize,
    terms: &[(usize, f64, f64)],
) -> Result<SupportBody> {
    let mut c = SpectralCoeffs::zeros(2, max_degree)?;
    let s = PI.sqrt();
    for &(k, a, b) in terms {
        if k == 0 {
            return Err(invalid("degree 0 is fixed by the width"));
        }
        c.set(k, k as i64, c.get(k, k as i64) + a * s)?;
        c.set(k, -(k as i64), c.get(k, -(k as i64)) + b * s)?;
    }
    SupportBody::from_deviation(width, &c)
}

/// Fourier amplitude of a planar mode (inverse of the orthonormal scaling).
pub fn planar_amplitude(mode: Mode, value: f64) -> f64 {
    if mode.degree == 0 {
        value / (2.0 * PI).sqrt()
    } else {
        value / PI.sqrt()
    }
}

/// Orthonormal coefficient of a planar Fourier amplitude.
pub fn planar_coefficient(mode: Mode, amplitude: f64) -> f64 {
    if mode.degree == 0 {
        amplitude * (2.0 * PI).sqrt()
    } else {
        amplitude * PI.sqrt()
    }
}
