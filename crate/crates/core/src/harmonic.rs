//! Spectral machinery on the circle S¹ and the sphere S².
//!
//! Functions are sampled on a [`SphereGrid`] (a [`GridFn`]) or expanded in a
//! real orthonormal harmonic basis ([`SpectralCoeffs`]):
//!
//! * on S¹ the basis is `1/√(2π)`, `cos(kω)/√π`, `sin(kω)/√π`;
//! * on S² it is the real spherical harmonics `Y_ℓ^m`, with `m > 0` carrying
//!   `√2·cos(mφ)` and `m < 0` carrying `√2·sin(|m|φ)`.
//!
//! A mode is addressed by `(degree, order)`. On S¹ the order of degree `k ≥ 1`
//! is `+k` for the cosine and `-k` for the sine; degree 0 has order 0.
//!
//! Both grids are closed under the antipodal map and integrate products of two
//! harmonics of degree `≤ resolution/2 - 1` exactly, so [`analyze`] and
//! [`synthesize`] are exact inverses on band-limited data.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// A harmonic mode: `degree` ℓ and signed `order` m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    pub degree: usize,
    pub order: i64,
}

impl Mode {
    pub fn new(degree: usize, order: i64) -> Self {
        Self { degree, order }
    }
}

/// Number of real basis functions of degree `≤ max_degree`.
pub fn coefficient_count(dim: usize, max_degree: usize) -> usize {
    match dim {
        2 => 2 * max_degree + 1,
        _ => (max_degree + 1) * (max_degree + 1),
    }
}

/// Number of basis functions of exactly degree `degree`.
pub fn degree_multiplicity(dim: usize, degree: usize) -> usize {
    match (dim, degree) {
        (2, 0) => 1,
        (2, _) => 2,
        (_, l) => 2 * l + 1,
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(invalid(format!("dimension {dim} unsupported (expected 2 or 3)")))
    }
}

fn mode_index(dim: usize, mode: Mode) -> Option<usize> {
    let l = mode.degree as i64;
    let m = mode.order;
    match dim {
        2 => match (l, m) {
            (0, 0) => Some(0),
            (0, _) => None,
            (l, m) if m == l => Some((2 * l - 1) as usize),
            (l, m) if m == -l => Some((2 * l) as usize),
            _ => None,
        },
        _ => {
            if m.abs() > l {
                None
            } else {
                Some((l * l + l + m) as usize)
            }
        }
    }
}

fn index_mode(dim: usize, index: usize) -> Mode {
    match dim {
        2 => {
            if index == 0 {
                Mode::new(0, 0)
            } else {
                let k = (index + 1) / 2;
                let order = if index % 2 == 1 { k as i64 } else { -(k as i64) };
                Mode::new(k, order)
            }
        }
        _ => {
            let l = (index as f64).sqrt().floor() as usize;
            let l = if (l + 1) * (l + 1) <= index { l + 1 } else { l };
            Mode::new(l, index as i64 - (l * l + l) as i64)
        }
    }
}

/// Coefficients of a band-limited function in the real orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralCoeffs {
    dim: usize,
    max_degree: usize,
    values: Vec<f64>,
}

impl SpectralCoeffs {
    pub fn zeros(dim: usize, max_degree: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            max_degree,
            values: vec![0.0; coefficient_count(dim, max_degree)],
        })
    }

    /// Wraps raw values laid out in the crate's mode order (see [`Self::modes`]).
    pub fn from_values(dim: usize, max_degree: usize, values: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        let expected = coefficient_count(dim, max_degree);
        if values.len() != expected {
            return Err(invalid(format!(
                "expected {expected} coefficients for degree {max_degree}, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("coefficient {:?} is not finite", index_mode(dim, i))));
        }
        Ok(Self {
            dim,
            max_degree,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The coefficient of `mode`, or zero when the mode lies beyond `max_degree`
    /// or does not exist.
    pub fn get(&self, degree: usize, order: i64) -> f64 {
        if degree > self.max_degree {
            return 0.0;
        }
        mode_index(self.dim, Mode::new(degree, order))
            .map(|i| self.values[i])
            .unwrap_or(0.0)
    }

    pub fn set(&mut self, degree: usize, order: i64, value: f64) -> Result<()> {
        if degree > self.max_degree {
            return Err(invalid(format!(
                "degree {degree} exceeds band limit {}",
                self.max_degree
            )));
        }
        if !value.is_finite() {
            return Err(invalid("coefficient must be finite"));
        }
        let i = mode_index(self.dim, Mode::new(degree, order))
            .ok_or_else(|| invalid(format!("no mode with degree {degree} and order {order}")))?;
        self.values[i] = value;
        Ok(())
    }

    /// Iterates `(mode, value)` in increasing degree.
    pub fn modes(&self) -> impl Iterator<Item = (Mode, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (index_mode(self.dim, i), v))
    }

    pub fn degree_coeffs(&self, degree: usize) -> impl Iterator<Item = (Mode, f64)> + '_ {
        self.modes().filter(move |(m, _)| m.degree == degree)
    }

    /// L² norm, which equals the Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Multiplies each coefficient by `f(degree)`.
    pub fn scale_by_degree(&self, f: impl Fn(usize) -> f64) -> Self {
        let values = self
            .modes()
            .map(|(mode, v)| v * f(mode.degree))
            .collect();
        Self {
            dim: self.dim,
            max_degree: self.max_degree,
            values,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.scale_by_degree(|_| factor)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            max_degree: self.max_degree,
            values,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    /// Zero-pads or truncates to a new band limit.
    pub fn with_max_degree(&self, max_degree: usize) -> Self {
        let mut out = Self {
            dim: self.dim,
            max_degree,
            values: vec![0.0; coefficient_count(self.dim, max_degree)],
        };
        let n = out.values.len().min(self.values.len());
        out.values[..n].copy_from_slice(&self.values[..n]);
        out
    }

    /// Largest coefficient magnitude among degree-1 modes.
    pub fn degree_one_max(&self) -> (i64, f64) {
        self.degree_coeffs(1)
            .map(|(m, v)| (m.order, v))
            .fold((0, 0.0), |acc, (o, v)| if v.abs() > acc.1.abs() { (o, v) } else { acc })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.max_degree != other.max_degree {
            return Err(invalid(format!(
                "band limits differ: {} vs {}",
                self.max_degree, other.max_degree
            )));
        }
        Ok(())
    }
}

/// Nodal samples of a function on a [`SphereGrid`], in node order.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFn(Vec<f64>);

impl GridFn {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn from_fn(grid: &SphereGrid, f: impl Fn(&Node) -> f64) -> Self {
        Self(grid.nodes().iter().map(f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self(self.0.iter().map(|&v| f(v)).collect())
    }

    /// `self + factor·other`
    pub fn axpy(&self, factor: f64, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + factor * b)
                .collect(),
        )
    }
}

/// A quadrature node: polar angle `theta`, azimuth `phi`, unit direction.
///
/// Circle nodes have `theta = π/2` and `phi` equal to the angular variable ω.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Node {
    pub theta: f64,
    pub phi: f64,
    pub direction: [f64; 3],
}

/// Antipodally closed quadrature grid on S^{dim-1}.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    dim: usize,
    resolution: usize,
    nodes: Vec<Node>,
    weights: Vec<f64>,
    antipode: Vec<usize>,
    /// cos θ per ring (dim 3 only); node `j·resolution + k` lies on ring `j`.
    ring_cos: Vec<f64>,
    ring_weights: Vec<f64>,
}

/// Builds the uniform circle grid (dim 2, `resolution` nodes) or the
/// Gauss–Legendre × uniform sphere grid (dim 3, `resolution` azimuthal nodes
/// on `resolution/2` rings).
pub fn make_grid(dim: usize, resolution: usize) -> Result<SphereGrid> {
    check_dim(dim)?;
    if resolution < 8 || resolution % 2 != 0 {
        return Err(invalid(format!(
            "resolution must be even and at least 8, got {resolution}"
        )));
    }
    Ok(if dim == 2 {
        circle_grid(resolution)
    } else {
        sphere_grid(resolution)
    })
}

fn circle_grid(n: usize) -> SphereGrid {
    let step = 2.0 * PI / n as f64;
    let nodes = (0..n)
        .map(|i| {
            let phi = step * i as f64;
            Node {
                theta: PI / 2.0,
                phi,
                direction: [phi.cos(), phi.sin(), 0.0],
            }
        })
        .collect();
    SphereGrid {
        dim: 2,
        resolution: n,
        nodes,
        weights: vec![step; n],
        antipode: (0..n).map(|i| (i + n / 2) % n).collect(),
        ring_cos: Vec::new(),
        ring_weights: Vec::new(),
    }
}

fn sphere_grid(m: usize) -> SphereGrid {
    let (xs, ws) = gauss_legendre(m / 2);
    let k_rings = xs.len();
    let dphi = 2.0 * PI / m as f64;
    let mut nodes = Vec::with_capacity(k_rings * m);
    let mut weights = Vec::with_capacity(k_rings * m);
    let mut antipode = Vec::with_capacity(k_rings * m);
    for (j, (&x, &w)) in xs.iter().zip(&ws).enumerate() {
        let theta = x.acos();
        let s = (1.0 - x * x).sqrt();
        for k in 0..m {
            let phi = dphi * k as f64;
            nodes.push(Node {
                theta,
                phi,
                direction: [s * phi.cos(), s * phi.sin(), x],
            });
            weights.push(w * dphi);
            antipode.push((k_rings - 1 - j) * m + (k + m / 2) % m);
        }
    }
    SphereGrid {
        dim: 3,
        resolution: m,
        nodes,
        weights,
        antipode,
        ring_cos: xs,
        ring_weights: ws,
    }
}

/// Gauss–Legendre nodes (descending) and weights on [-1, 1], mirrored so that
/// `x[n-1-i] = -x[i]` holds bit-exactly.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let legendre = |x: f64| {
        // (P_n(x), P_n'(x))
        let mut p0 = 1.0;
        let mut p1 = x;
        if n == 0 {
            return (1.0, 0.0);
        }
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        (p1, dp)
    };
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        if n % 2 == 1 && i == n / 2 {
            x = 0.0;
        } else {
            for _ in 0..100 {
                let (p, dp) = legendre(x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
        }
        let dp = legendre(x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = x;
        ws[i] = w;
        xs[n - 1 - i] = -x;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

impl SphereGrid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Node count (dim 2) or azimuthal node count (dim 3).
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `antipode()[i]` is the index of the node at `-node[i]`.
    pub fn antipode(&self) -> &[usize] {
        &self.antipode
    }

    pub fn total_measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Highest degree the grid resolves without aliasing.
    pub fn default_max_degree(&self) -> usize {
        self.resolution / 2 - 1
    }

    pub fn supports_degree(&self, max_degree: usize) -> bool {
        self.resolution >= 2 * max_degree + 2
    }

    /// Quadrature inner product of two nodal functions.
    pub fn inner(&self, a: &GridFn, b: &GridFn) -> f64 {
        self.weights
            .iter()
            .zip(a.values().iter().zip(b.values()))
            .map(|(w, (x, y))| w * x * y)
            .sum()
    }

    pub fn integrate(&self, f: &GridFn) -> f64 {
        self.weights
            .iter()
            .zip(f.values())
            .map(|(w, v)| w * v)
            .sum()
    }

    /// `(f - f∘a)/2`, the antipodally antisymmetric part.
    pub fn antisymmetric_part(&self, f: &GridFn) -> GridFn {
        let v = f.values();
        GridFn::new(
            self.antipode
                .iter()
                .enumerate()
                .map(|(i, &a)| 0.5 * (v[i] - v[a]))
                .collect(),
        )
    }

    /// Removes the quadrature projection onto the degree-1 harmonics.
    pub fn remove_degree_one(&self, f: &GridFn) -> GridFn {
        let mut out = f.clone();
        for basis in self.degree_one_basis() {
            let c = self.inner(f, &basis);
            out = out.axpy(-c, &basis);
        }
        out
    }

    /// The orthonormal degree-1 harmonics sampled at the nodes.
    pub fn degree_one_basis(&self) -> Vec<GridFn> {
        let axes = self.dim;
        let norm = match self.dim {
            2 => 1.0 / PI.sqrt(),
            _ => (3.0 / (4.0 * PI)).sqrt(),
        };
        (0..axes)
            .map(|axis| GridFn::from_fn(self, |n| norm * n.direction[axis]))
            .collect()
    }

    /// Largest `|f(ω) + f(ω^a)|` over the nodes.
    pub fn antisymmetry_defect(&self, f: &GridFn) -> f64 {
        let v = f.values();
        self.antipode
            .iter()
            .enumerate()
            .map(|(i, &a)| (v[i] + v[a]).abs())
            .fold(0.0, f64::max)
    }
}

/// Precomputed analysis/synthesis tables for one grid and band limit.
#[derive(Clone, Debug)]
pub struct Transform {
    dim: usize,
    max_degree: usize,
    resolution: usize,
    weights: Vec<f64>,
    cos_table: Vec<f64>,
    sin_table: Vec<f64>,
    /// Normalized associated Legendre values, `legendre[j][tri(ℓ, m)]`.
    legendre: Vec<Vec<f64>>,
    ring_weights: Vec<f64>,
}

fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Fully normalized associated Legendre functions `P̄_ℓ^m(x)` for `0 ≤ m ≤ ℓ ≤ max_degree`,
/// scaled so that `P̄_ℓ^0` and `√2·P̄_ℓ^m cos(mφ)` are orthonormal on S².
pub(crate) fn normalized_legendre(max_degree: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; tri(max_degree, max_degree) + 1];
    let s = (1.0 - x * x).max(0.0).sqrt();
    p[0] = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=max_degree {
        if m > 0 {
            let mf = m as f64;
            p[tri(m, m)] = ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * p[tri(m - 1, m - 1)];
        }
        if m < max_degree {
            p[tri(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * x * p[tri(m, m)];
        }
        let mf = m as f64;
        for l in (m + 2)..=max_degree {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let lp = lf - 1.0;
            let a_prev = ((4.0 * lp * lp - 1.0) / (lp * lp - mf * mf)).sqrt();
            p[tri(l, m)] = a * (x * p[tri(l - 1, m)] - p[tri(l - 2, m)] / a_prev);
        }
    }
    p
}

impl Transform {
    pub fn new(grid: &SphereGrid, max_degree: usize) -> Result<Self> {
        if !grid.supports_degree(max_degree) {
            return Err(invalid(format!(
                "resolution {} cannot resolve degree {max_degree} (need at least {})",
                grid.resolution,
                2 * max_degree + 2
            )));
        }
        let n = grid.resolution;
        let cos_table = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).cos()).collect();
        let sin_table = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).sin()).collect();
        let legendre = grid
            .ring_cos
            .iter()
            .map(|&x| normalized_legendre(max_degree, x))
            .collect();
        Ok(Self {
            dim: grid.dim,
            max_degree,
            resolution: n,
            weights: grid.weights.clone(),
            cos_table,
            sin_table,
            legendre,
            ring_weights: grid.ring_weights.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn node_count(&self) -> usize {
        self.weights.len()
    }

    pub fn analyze(&self, f: &GridFn) -> Result<SpectralCoeffs> {
        if f.len() != self.node_count() {
            return Err(invalid(format!(
                "grid function has {} samples, grid has {} nodes",
                f.len(),
                self.node_count()
            )));
        }
        let mut out = SpectralCoeffs::zeros(self.dim, self.max_degree)?;
        let v = f.values();
        let n = self.resolution;
        if self.dim == 2 {
            let w = self.weights[0];
            let c0 = 1.0 / (2.0 * PI).sqrt();
            let ck = 1.0 / PI.sqrt();
            out.values[0] = w * c0 * v.iter().sum::<f64>();
            for k in 1..=self.max_degree {
                let (mut a, mut b) = (0.0, 0.0);
                for (i, &fi) in v.iter().enumerate() {
                    let j = (k * i) % n;
                    a += fi * self.cos_table[j];
                    b += fi * self.sin_table[j];
                }
                out.values[2 * k - 1] = w * ck * a;
                out.values[2 * k] = w * ck * b;
            }
        } else {
            let dphi = 2.0 * PI / n as f64;
            let l_max = self.max_degree;
            for (j, ring) in v.chunks(n).enumerate() {
                let wj = self.ring_weights[j] * dphi;
                let plm = &self.legendre[j];
                for m in 0..=l_max {
                    let (mut a, mut b) = (0.0, 0.0);
                    for (k, &fk) in ring.iter().enumerate() {
                        let idx = (m * k) % n;
                        a += fk * self.cos_table[idx];
                        b += fk * self.sin_table[idx];
                    }
                    let scale = if m == 0 { 1.0 } else { std::f64::consts::SQRT_2 };
                    for l in m..=l_max {
                        let pw = wj * scale * plm[tri(l, m)];
                        let li = l * l + l;
                        out.values[li + m] += pw * a;
                        if m > 0 {
                            out.values[li - m] += pw * b;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn synthesize(&self, c: &SpectralCoeffs) -> Result<GridFn> {
        if c.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: c.dim,
            });
        }
        let c = if c.max_degree == self.max_degree {
            std::borrow::Cow::Borrowed(c)
        } else if c.max_degree < self.max_degree {
            std::borrow::Cow::Owned(c.with_max_degree(self.max_degree))
        } else {
            return Err(invalid(format!(
                "coefficients of degree {} exceed transform band limit {}",
                c.max_degree, self.max_degree
            )));
        };
        let n = self.resolution;
        let mut out = vec![0.0; self.node_count()];
        if self.dim == 2 {
            let c0 = 1.0 / (2.0 * PI).sqrt();
            let ck = 1.0 / PI.sqrt();
            for (i, o) in out.iter_mut().enumerate() {
                let mut s = c.values[0] * c0;
                for k in 1..=self.max_degree {
                    let j = (k * i) % n;
                    s += ck * (c.values[2 * k - 1] * self.cos_table[j] + c.values[2 * k] * self.sin_table[j]);
                }
                *o = s;
            }
        } else {
            let l_max = self.max_degree;
            for (j, ring) in out.chunks_mut(n).enumerate() {
                let plm = &self.legendre[j];
                // Fourier coefficients of ring j in cos/sin(mφ).
                let mut am = vec![0.0; l_max + 1];
                let mut bm = vec![0.0; l_max + 1];
                for m in 0..=l_max {
                    let scale = if m == 0 { 1.0 } else { std::f64::consts::SQRT_2 };
                    for l in m..=l_max {
                        let li = l * l + l;
                        let p = scale * plm[tri(l, m)];
                        am[m] += p * c.values[li + m];
                        if m > 0 {
                            bm[m] += p * c.values[li - m];
                        }
                    }
                }
                for (k, o) in ring.iter_mut().enumerate() {
                    let mut s = am[0];
                    for m in 1..=l_max {
                        let idx = (m * k) % n;
                        s += am[m] * self.cos_table[idx] + bm[m] * self.sin_table[idx];
                    }
                    *o = s;
                }
            }
        }
        Ok(GridFn::new(out))
    }
}

/// Quadrature inner products of `f` against the basis up to degree `max_degree`.
pub fn analyze(grid: &SphereGrid, f: &GridFn, max_degree: usize) -> Result<SpectralCoeffs> {
    Transform::new(grid, max_degree)?.analyze(f)
}

/// Evaluates the expansion `c` at every node of `grid`.
pub fn synthesize(c: &SpectralCoeffs, grid: &SphereGrid) -> Result<GridFn> {
    if c.dim != grid.dim {
        return Err(Error::DimensionMismatch {
            expected: grid.dim,
            found: c.dim,
        });
    }
    Transform::new(grid, c.max_degree)?.synthesize(c)
}

/// Eigenvalue `ℓ(ℓ+d-2)` of `-∇²` on S^{d-1}.
pub fn laplace_eigenvalue(dim: usize, degree: i64) -> Result<f64> {
    if degree < 0 {
        return Err(invalid(format!("degree must be non-negative, got {degree}")));
    }
    if dim < 2 {
        return Err(invalid(format!("dimension must be at least 2, got {dim}")));
    }
    let l = degree as f64;
    Ok(l * (l + dim as f64 - 2.0))
}

/// Spectral Laplace–Beltrami operator `∇²` (coefficient-wise `-ℓ(ℓ+d-2)`).
pub fn laplacian(c: &SpectralCoeffs) -> SpectralCoeffs {
    let d = c.dim as f64;
    c.scale_by_degree(|l| {
        let l = l as f64;
        -l * (l + d - 2.0)
    })
}

/// Diagonal action of the reduced resolvent of `∇² + (d-1)` on `H₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct GreenMultipliers {
    dim: usize,
    values: Vec<f64>,
}

impl GreenMultipliers {
    /// Multipliers for degrees `0..=max_degree`; works for any `dim ≥ 2`.
    pub fn new(dim: usize, max_degree: usize) -> Result<Self> {
        if dim < 2 {
            return Err(invalid(format!("dimension must be at least 2, got {dim}")));
        }
        let d = dim as f64;
        let values = (0..=max_degree)
            .map(|l| {
                if l == 1 {
                    f64::NAN
                } else {
                    let l = l as f64;
                    1.0 / ((d - 1.0) - l * (l + d - 2.0))
                }
            })
            .collect();
        Ok(Self { dim, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.values.len() - 1
    }

    /// `g_ℓ`, or `None` for the kernel degree 1 and for degrees past the table.
    pub fn get(&self, degree: usize) -> Option<f64> {
        self.values.get(degree).copied().filter(|v| !v.is_nan())
    }
}

/// Relative size below which degree-1 content counts as absent.
pub const DEGREE_ONE_TOLERANCE: f64 = 1e-12;

/// Solves `∇²p + (d-1)p = c` for `p ⊥ Y₁`. The input must already be free of
/// degree-1 content.
pub fn apply_green(c: &SpectralCoeffs) -> Result<SpectralCoeffs> {
    let (order, value) = c.degree_one_max();
    if value.abs() > DEGREE_ONE_TOLERANCE * c.norm().max(1.0) {
        return Err(Error::PreconditionViolation(format!(
            "input has degree-1 coefficient (order {order}) = {value:e}; the operator is singular there"
        )));
    }
    let g = GreenMultipliers::new(c.dim, c.max_degree)?;
    Ok(c.scale_by_degree(|l| g.get(l).unwrap_or(0.0)))
}

/// Orthogonal projection onto the linear part of the admissible set: keeps the
/// odd degrees `≥ 3`, i.e. antipodally antisymmetric content orthogonal to `Y₁`.
pub fn project_linear_h(c: &SpectralCoeffs) -> SpectralCoeffs {
    c.scale_by_degree(|l| if l % 2 == 1 && l >= 3 { 1.0 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn circle_grid_of_eight() {
        let g = make_grid(2, 8).unwrap();
        assert_eq!(g.len(), 8);
        for (i, w) in g.weights().iter().enumerate() {
            assert_eq!(*w, PI / 4.0);
            assert_eq!(g.antipode()[i], (i + 4) % 8);
        }
        assert!(close(g.total_measure(), 2.0 * PI, 1e-15));
    }

    #[test]
    fn sphere_grid_measure_and_antipodes() {
        let g = make_grid(3, 16).unwrap();
        assert_eq!(g.len(), 16 * 8);
        assert!((g.total_measure() - 4.0 * PI).abs() / (4.0 * PI) <= 1e-12);
        for (i, &a) in g.antipode().iter().enumerate() {
            assert_eq!(g.antipode()[a], i);
            let (p, q) = (g.nodes()[i].direction, g.nodes()[a].direction);
            for k in 0..3 {
                assert!(close(p[k], -q[k], 1e-14), "{p:?} vs {q:?}");
            }
            assert_eq!(g.weights()[i], g.weights()[a]);
        }
    }

    #[test]
    fn rejects_bad_resolution() {
        assert!(make_grid(2, 9).is_err());
        assert!(make_grid(2, 6).is_err());
        assert!(make_grid(3, 7).is_err());
        assert!(make_grid(4, 16).is_err());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [4, 5, 8, 13] {
            let (x, w) = gauss_legendre(n);
            for p in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!(close(q, exact, 1e-13), "n={n} p={p}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn cosine_analyzes_to_single_mode() {
        let g = make_grid(2, 64).unwrap();
        let f = GridFn::from_fn(&g, |n| (3.0 * n.phi).cos());
        let c = analyze(&g, &f, 31).unwrap();
        for (mode, v) in c.modes() {
            if mode == Mode::new(3, 3) {
                assert!(close(v, PI.sqrt(), 1e-12));
            } else {
                assert!(v.abs() <= 1e-12, "{mode:?} = {v}");
            }
        }
        // unit amplitude in cos(3ω)
        assert!(close(c.get(3, 3) / PI.sqrt(), 1.0, 1e-12));
    }

    #[test]
    fn constant_analyzes_to_degree_zero() {
        let g = make_grid(2, 32).unwrap();
        let c = analyze(&g, &GridFn::new(vec![1.0; 32]), 15).unwrap();
        assert!(close(c.get(0, 0), (2.0 * PI).sqrt(), 1e-12));
        assert!(c.modes().skip(1).all(|(_, v)| v.abs() < 1e-13));
        let back = synthesize(&c, &g).unwrap();
        assert!(back.values().iter().all(|v| close(*v, 1.0, 1e-13)));
    }

    #[test]
    fn zero_coeffs_synthesize_to_zero() {
        let g = make_grid(3, 12).unwrap();
        let c = SpectralCoeffs::zeros(3, 5).unwrap();
        assert_eq!(synthesize(&c, &g).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn synthesize_rejects_dim_mismatch() {
        let g = make_grid(2, 16).unwrap();
        let c = SpectralCoeffs::zeros(3, 3).unwrap();
        assert!(matches!(synthesize(&c, &g), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn analyze_rejects_underresolved_degree() {
        let g = make_grid(2, 16).unwrap();
        assert!(analyze(&g, &GridFn::zeros(16), 8).is_err());
        assert!(analyze(&g, &GridFn::zeros(16), 7).is_ok());
    }

    #[test]
    fn spherical_harmonics_are_orthonormal_under_quadrature() {
        let l_max = 9;
        let g = make_grid(3, 2 * l_max + 2).unwrap();
        let t = Transform::new(&g, l_max).unwrap();
        let n = coefficient_count(3, l_max);
        for i in 0..n {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            let c = SpectralCoeffs::from_values(3, l_max, v).unwrap();
            let back = t.analyze(&t.synthesize(&c).unwrap()).unwrap();
            for (j, x) in back.values().iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(close(*x, expect, 1e-12), "({i},{j}) -> {x}");
            }
        }
    }

    #[test]
    fn degree_one_harmonics_match_direction_components() {
        let g = make_grid(3, 16).unwrap();
        let t = Transform::new(&g, 2).unwrap();
        let mut c = SpectralCoeffs::zeros(3, 2).unwrap();
        c.set(1, 0, 1.0).unwrap();
        let f = t.synthesize(&c).unwrap();
        let norm = (3.0 / (4.0 * PI)).sqrt();
        for (v, node) in f.values().iter().zip(g.nodes()) {
            assert!(close(v.abs(), norm * node.direction[2].abs(), 1e-14));
        }
    }

    #[test]
    fn laplace_spectrum() {
        assert_eq!(laplace_eigenvalue(2, 1).unwrap(), 1.0);
        assert_eq!(laplace_eigenvalue(3, 1).unwrap(), 2.0);
        assert_eq!(laplace_eigenvalue(2, 3).unwrap(), 9.0);
        assert!(laplace_eigenvalue(2, -1).is_err());
    }

    #[test]
    fn green_multiplier_shape() {
        for d in [2, 3, 4, 7] {
            let g = GreenMultipliers::new(d, 40).unwrap();
            assert_eq!(g.get(0).unwrap(), 1.0 / (d as f64 - 1.0));
            assert!(g.get(1).is_none());
            let mut prev = f64::INFINITY;
            for l in 2..=40 {
                let v = g.get(l).unwrap();
                assert!(v < 0.0);
                assert!(v.abs() < prev);
                prev = v.abs();
            }
        }
    }

    #[test]
    fn green_solves_cos3() {
        let mut c = SpectralCoeffs::zeros(2, 5).unwrap();
        c.set(3, 3, 1.0).unwrap();
        let p = apply_green(&c).unwrap();
        assert!(close(p.get(3, 3), -1.0 / 8.0, 1e-15));
        assert!(p.modes().filter(|(m, _)| m.degree != 3).all(|(_, v)| v == 0.0));
    }

    #[test]
    fn green_keeps_constants() {
        let mut c = SpectralCoeffs::zeros(2, 3).unwrap();
        c.set(0, 0, 2.5).unwrap();
        assert_eq!(apply_green(&c).unwrap().get(0, 0), 2.5);
    }

    #[test]
    fn green_refuses_degree_one() {
        let mut c = SpectralCoeffs::zeros(2, 3).unwrap();
        c.set(1, 1, 0.5).unwrap();
        let err = apply_green(&c).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolation(ref s) if s.contains("order 1")));
    }

    #[test]
    fn linear_projection_keeps_odd_degrees_from_three() {
        let g = make_grid(2, 32).unwrap();
        let f = GridFn::from_fn(&g, |n| n.phi.cos() + (2.0 * n.phi).cos() + (3.0 * n.phi).sin());
        let c = analyze(&g, &f, 15).unwrap();
        let p = project_linear_h(&c);
        let back = synthesize(&p, &g).unwrap();
        for (v, n) in back.values().iter().zip(g.nodes()) {
            assert!(close(*v, (3.0 * n.phi).sin(), 1e-13));
        }
        assert_eq!(project_linear_h(&p), p);
        for (_, v) in p.degree_coeffs(1) {
            assert!(v.abs() <= 1e-14);
        }
    }

    #[test]
    fn nodal_linear_projection_matches_spectral_one() {
        let g = make_grid(2, 64).unwrap();
        let f = GridFn::from_fn(&g, |n| {
            0.3 + n.phi.sin() + 0.2 * (2.0 * n.phi).cos() - 0.7 * (5.0 * n.phi).cos() + 0.1 * n.phi.sin().powi(3)
        });
        let nodal = g.remove_degree_one(&g.antisymmetric_part(&f));
        let spectral = synthesize(&project_linear_h(&analyze(&g, &f, 31).unwrap()), &g).unwrap();
        for (a, b) in nodal.values().iter().zip(spectral.values()) {
            assert!(close(*a, *b, 1e-13));
        }
    }

    #[test]
    fn mode_index_round_trip() {
        for dim in [2, 3] {
            for i in 0..coefficient_count(dim, 12) {
                let m = index_mode(dim, i);
                assert_eq!(mode_index(dim, m), Some(i));
            }
        }
    }
}
