//! Regular Reuleaux polygons with an odd number of sides.
//!
//! The deviation `p̄ = p - B/2` of the support function alternates between two
//! pieces on windows of angular width `π/n`:
//!
//! * corner windows `|ω| ≤ α`: `p̄ = (m + B/2)·cos ω - B/2`, where `R = 0`;
//! * arc windows `α ≤ ω ≤ 3α`: `p̄ = -(m + B/2)·cos(2α - ω) + B/2`, where `R = B`;
//!
//! with `α = π/(2n)` and `cos α = B/(2m + B)`. The maximum `m` of `p̄` sits at ω = 0.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::body::{planar_coefficient, SupportBody};
use crate::error::{invalid, Result};
use crate::harmonic::{Mode, SpectralCoeffs};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReuleauxSpec {
    sides: usize,
    width: f64,
    amplitude: f64,
    half_angle: f64,
}

impl ReuleauxSpec {
    pub fn new(sides: usize, width: f64) -> Result<Self> {
        if sides < 3 || sides % 2 == 0 {
            return Err(invalid(format!(
                "a Reuleaux polygon needs an odd number of sides ≥ 3, got {sides}"
            )));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(invalid(format!("width must be positive, got {width}")));
        }
        let half_angle = PI / (2.0 * sides as f64);
        let amplitude = width * (1.0 / half_angle.cos() - 1.0) / 2.0;
        Ok(Self {
            sides,
            width,
            amplitude,
            half_angle,
        })
    }

    pub fn sides(&self) -> usize {
        self.sides
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Maximum of `p̄`.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Half-width α of a window; `p̄(±α) = 0`.
    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    /// Window containing ω: the reduced angle `u ∈ [-α, 3α)` and whether it is
    /// a corner window.
    fn locate(&self, omega: f64) -> (f64, bool) {
        let a = self.half_angle;
        let period = 4.0 * a;
        let u = (omega + a).rem_euclid(period) - a;
        (u, u <= a)
    }
}

/// Alias for [`ReuleauxSpec::new`].
pub fn make_spec(sides: usize, width: f64) -> Result<ReuleauxSpec> {
    ReuleauxSpec::new(sides, width)
}

/// The exact deviation `p̄(ω)` of the support function.
pub fn support_piecewise(spec: &ReuleauxSpec, omega: f64) -> f64 {
    let h = spec.width / 2.0;
    let k = spec.amplitude + h;
    match spec.locate(omega) {
        (u, true) => k * u.cos() - h,
        (u, false) => -k * (2.0 * spec.half_angle - u).cos() + h,
    }
}

/// `p̄′(ω)` from the piecewise form.
pub fn support_piecewise_derivative(spec: &ReuleauxSpec, omega: f64) -> f64 {
    let k = spec.amplitude + spec.width / 2.0;
    match spec.locate(omega) {
        (u, true) => -k * u.sin(),
        (u, false) => -k * (2.0 * spec.half_angle - u).sin(),
    }
}

/// Radius of curvature: 0 on corner windows, B on arc windows.
pub fn curvature_square_wave(spec: &ReuleauxSpec, omega: f64) -> f64 {
    if spec.locate(omega).1 {
        0.0
    } else {
        spec.width
    }
}

/// Fourier amplitude of `cos(kω)` in `R̄ = R - B/2`; only odd multiples of `n` occur.
fn curvature_amplitude(spec: &ReuleauxSpec, k: usize) -> f64 {
    let n = spec.sides;
    if k % n != 0 || (k / n) % 2 == 0 {
        return 0.0;
    }
    let j = k / n;
    let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
    -(2.0 * spec.width / PI) * sign / j as f64
}

/// Plain Fourier truncation of the support function at degree `max_degree`.
pub fn to_body(spec: &ReuleauxSpec, max_degree: usize) -> Result<SupportBody> {
    if max_degree < 4 * spec.sides {
        return Err(invalid(format!(
            "band limit {max_degree} too small for {} sides (need at least {})",
            spec.sides,
            4 * spec.sides
        )));
    }
    let mut deviation = SpectralCoeffs::zeros(2, max_degree)?;
    for k in (spec.sides..=max_degree).step_by(2 * spec.sides) {
        let r = curvature_amplitude(spec, k);
        let p = r / (1.0 - (k * k) as f64);
        deviation.set(k, k as i64, planar_coefficient(Mode::new(k, k as i64), p))?;
    }
    SupportBody::from_deviation(spec.width, &deviation)
}

/// `(B²/2)(π - n·tan(π/(2n)))`.
pub fn closed_area(spec: &ReuleauxSpec) -> f64 {
    let n = spec.sides as f64;
    0.5 * spec.width * spec.width * (PI - n * (PI / (2.0 * n)).tan())
}

/// Rows `(n, area)` for `n = 3, 5, …, n_max`.
pub fn area_table(n_max: usize, width: f64) -> Result<Vec<(usize, f64)>> {
    if n_max < 3 || n_max % 2 == 0 {
        return Err(invalid(format!("maximum side count must be odd and ≥ 3, got {n_max}")));
    }
    (3..=n_max)
        .step_by(2)
        .map(|n| Ok((n, closed_area(&ReuleauxSpec::new(n, width)?))))
        .collect()
}

/// Whether the area column strictly increases.
pub fn is_strictly_increasing(table: &[(usize, f64)]) -> bool {
    table.windows(2).all(|w| w[0].1 < w[1].1)
}

/// CSV with header `n,area`; values use shortest round-trip formatting.
pub fn table_csv(table: &[(usize, f64)]) -> String {
    let mut s = String::from("n,area\n");
    for (n, a) in table {
        writeln!(s, "{n},{a:?}").unwrap();
    }
    s
}
