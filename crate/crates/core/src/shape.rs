//! JSON shape files and optimization records.
//!
//! A shape file stores a support function:
//!
//! ```json
//! { "dim": 2, "width": 1.0,
//!   "coeffs": [ { "degree": 0, "part": "cos", "value": 0.5 },
//!               { "degree": 3, "part": "sin", "value": -0.01 } ] }
//! ```
//!
//! Planar entries are plain Fourier amplitudes of `p(ω) = a₀ + Σ aₖ cos kω + bₖ sin kω`,
//! so a disk of width `B` is the single entry `a₀ = B/2`. Entries for `dim: 3`
//! carry `"order"` instead of `"part"` and hold real orthonormal spherical
//! harmonic coefficients.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::body::{planar_amplitude, planar_coefficient, SupportBody};
use crate::error::{Error, Result};
use crate::harmonic::{Mode, SpectralCoeffs};
use crate::variational::OptimizationResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Cos,
    Sin,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffEntry {
    Planar(PlanarEntry),
    Spherical(SphericalEntry),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanarEntry {
    pub degree: usize,
    pub part: Part,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphericalEntry {
    pub degree: usize,
    pub order: i64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeFile {
    pub dim: usize,
    pub width: f64,
    pub coeffs: Vec<CoeffEntry>,
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Nonzero coefficients (and always degree 0) in increasing degree.
pub fn coeff_entries(c: &SpectralCoeffs) -> Vec<CoeffEntry> {
    let mut out = Vec::new();
    for (m, v) in c.modes() {
        if v == 0.0 && m.degree != 0 {
            continue;
        }
        out.push(match c.dim() {
            2 => CoeffEntry::Planar(PlanarEntry {
                degree: m.degree,
                part: if m.order >= 0 { Part::Cos } else { Part::Sin },
                value: planar_amplitude(m, v),
            }),
            _ => CoeffEntry::Spherical(SphericalEntry {
                degree: m.degree,
                order: m.order,
                value: v,
            }),
        });
    }
    // cos before sin within a planar degree
    out.sort_by_key(|e| match e {
        CoeffEntry::Planar(p) => (p.degree, (p.part == Part::Sin) as i64),
        CoeffEntry::Spherical(s) => (s.degree, s.order),
    });
    out
}

fn entry_mode(dim: usize, entry: &CoeffEntry) -> Result<(Mode, f64)> {
    match (dim, entry) {
        (2, CoeffEntry::Planar(p)) => {
            let order = match p.part {
                Part::Cos => p.degree as i64,
                Part::Sin if p.degree == 0 => {
                    return Err(format_err("degree 0 has no sin part"));
                }
                Part::Sin => -(p.degree as i64),
            };
            let m = Mode::new(p.degree, order);
            Ok((m, planar_coefficient(m, p.value)))
        }
        (3, CoeffEntry::Spherical(s)) => {
            if s.order.unsigned_abs() as usize > s.degree {
                return Err(format_err(format!(
                    "order {} exceeds degree {}",
                    s.order, s.degree
                )));
            }
            Ok((Mode::new(s.degree, s.order), s.value))
        }
        (2, _) => Err(format_err("planar coefficients need \"part\", not \"order\"")),
        (3, _) => Err(format_err("spherical coefficients need \"order\", not \"part\"")),
        (d, _) => Err(format_err(format!("unsupported dimension {d}"))),
    }
}

/// Spectral coefficients from JSON entries, in any order; duplicates are rejected.
pub fn coeffs_from_entries(dim: usize, entries: &[CoeffEntry]) -> Result<SpectralCoeffs> {
    let mut seen = BTreeMap::new();
    for e in entries {
        let (m, v) = entry_mode(dim, e)?;
        if !v.is_finite() {
            return Err(format_err("coefficient values must be finite"));
        }
        if seen.insert((m.degree, m.order), v).is_some() {
            return Err(format_err(format!(
                "duplicate coefficient for degree {} order {}",
                m.degree, m.order
            )));
        }
    }
    let top = seen.keys().map(|&(l, _)| l).max().unwrap_or(0);
    let mut c = SpectralCoeffs::zeros(dim, top)?;
    for ((l, o), v) in seen {
        c.set(l, o, v)?;
    }
    Ok(c)
}

impl ShapeFile {
    pub fn from_body(body: &SupportBody) -> Self {
        Self {
            dim: body.dim(),
            width: body.width(),
            coeffs: coeff_entries(body.coeffs()),
        }
    }

    pub fn to_body(&self) -> Result<SupportBody> {
        if self.dim != 2 && self.dim != 3 {
            return Err(format_err(format!("unsupported dimension {}", self.dim)));
        }
        if !self.width.is_finite() {
            return Err(format_err("width must be finite"));
        }
        SupportBody::new(self.width, coeffs_from_entries(self.dim, &self.coeffs)?)
    }
}

pub fn body_to_json(body: &SupportBody) -> String {
    let mut s = serde_json::to_string_pretty(&ShapeFile::from_body(body)).expect("serializable");
    s.push('\n');
    s
}

pub fn body_from_json(text: &str) -> Result<SupportBody> {
    let file: ShapeFile = serde_json::from_str(text).map_err(|e| format_err(e.to_string()))?;
    file.to_body()
}

pub fn read_shape(path: &Path) -> Result<SupportBody> {
    body_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_shape(path: &Path, body: &SupportBody) -> Result<()> {
    write_atomic(path, body_to_json(body).as_bytes())
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Serialized form of an [`OptimizationResult`]. `coeffs` holds the support
/// function of the minimizer in shape-file entry form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizationRecord {
    pub phi: f64,
    pub area: Option<f64>,
    pub iterations: usize,
    pub seed: u64,
    pub violation: f64,
    pub sign_consistency: f64,
    pub coeffs: Vec<CoeffEntry>,
    pub dim: usize,
    pub width: f64,
    pub grid: usize,
    pub modes: usize,
    pub converged: bool,
    pub equivalence_warning: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl OptimizationRecord {
    pub fn new(result: &OptimizationResult, support: &SupportBody, grid: usize) -> Self {
        Self {
            phi: result.phi_value,
            area: result.area,
            iterations: result.iterations,
            seed: result.restart_seed,
            violation: result.bangbang_violation,
            sign_consistency: result.sign_consistency,
            coeffs: coeff_entries(support.coeffs()),
            dim: support.dim(),
            width: support.width(),
            grid,
            modes: support.max_degree(),
            converged: result.converged,
            equivalence_warning: result.equivalence_warning,
            timestamp: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn support(&self) -> Result<SupportBody> {
        SupportBody::new(self.width, coeffs_from_entries(self.dim, &self.coeffs)?)
    }
}
