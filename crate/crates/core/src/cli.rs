//! The `orbiform` command line.
//!
//! Exit codes: 0 success, 1 failed invariant, 2 usage or malformed input,
//! 3 numerical failure, 4 regression in a closed-form table.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::body::{area_quadrature, boundary_samples, validate, SupportBody, ValidationOptions};
use crate::body::STRICT_CONVEXITY_TOLERANCE;
use crate::error::{Error, Result};
use crate::harmonic::make_grid;
use crate::reuleaux::{area_table, closed_area, is_strictly_increasing, table_csv, to_body, ReuleauxSpec};
use crate::shape::{read_shape, write_atomic, write_shape, OptimizationRecord};
use crate::spheroform::{explore_minimize3d, width_residual, SpheroformCandidate};
use crate::variational::{minimize, support_of, MinimizeParams, Problem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_REGRESSION: i32 = 4;

/// Samples along the boundary path of an SVG rendering.
pub const SVG_SAMPLES: usize = 1024;
const SVG_SIZE: f64 = 512.0;
const SVG_MARGIN: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(name = "orbiform", version, about = "Bodies of constant width in spectral form")]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a Reuleaux polygon and report its area.
    Reuleaux {
        #[arg(long)]
        sides: usize,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        /// Band limit of the truncated support function (at least 4·sides).
        #[arg(long, default_value_t = 1024)]
        modes: usize,
        /// Shape JSON output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Minimize the area functional over the admissible set.
    Optimize {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        /// Nodes on the circle (d = 2) or azimuths on the sphere (d = 3).
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Band limit; defaults to grid/4 (d = 2) or grid/2 - 1 (d = 3).
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50_000)]
        max_iterations: usize,
        /// OptimizationResult JSON output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Shape JSON of the minimizer's support function.
        #[arg(long)]
        shape: Option<PathBuf>,
        /// Record the wall-clock time in the JSON output.
        #[arg(long)]
        timestamp: bool,
    },
    /// Check a shape file against the constant-width invariants.
    Validate {
        file: PathBuf,
        /// Also require the degree-1 part of the support function to vanish.
        #[arg(long)]
        canonical: bool,
        /// Allowed dip of the curvature radius below zero, relative to the width.
        #[arg(long, default_value_t = STRICT_CONVEXITY_TOLERANCE)]
        convexity_tol: f64,
    },
    /// Closed-form areas of odd Reuleaux polygons as CSV.
    Table {
        #[arg(long)]
        max: usize,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CommandConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(&config.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NumericalFailure(_) => EXIT_NUMERICAL,
        Error::ClosednessViolation { .. } => EXIT_INVARIANT,
        _ => EXIT_USAGE,
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

pub fn dispatch(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Reuleaux {
            sides,
            width,
            modes,
            out: path,
            svg,
        } => cmd_reuleaux(*sides, *width, *modes, path.as_ref(), svg.as_ref(), out),
        Command::Optimize {
            dim,
            width,
            grid,
            modes,
            restarts,
            seed,
            max_iterations,
            out: path,
            shape,
            timestamp,
        } => {
            let params = MinimizeParams {
                restarts: *restarts,
                max_iterations: *max_iterations,
                ..MinimizeParams::default()
            };
            let opts = OptimizeOutputs {
                json: path.clone(),
                shape: shape.clone(),
                timestamp: *timestamp,
            };
            cmd_optimize(*dim, *width, *grid, *modes, *seed, &params, &opts, out)
        }
        Command::Validate {
            file,
            canonical,
            convexity_tol,
        } => cmd_validate(file, *canonical, *convexity_tol, out),
        Command::Table {
            max,
            width,
            out: path,
        } => cmd_table(*max, *width, path.as_ref(), out),
    }
}

pub fn cmd_reuleaux(
    sides: usize,
    width: f64,
    modes: usize,
    json: Option<&PathBuf>,
    svg: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<i32> {
    let spec = ReuleauxSpec::new(sides, width)?;
    let body = to_body(&spec, modes)?;
    let grid = make_grid(2, 4 * (modes + 1))?;
    let quadrature = area_quadrature(&body, &grid)?;
    writeln!(out, "Reuleaux {sides}-gon of width {width}")?;
    writeln!(out, "closed-form area  {:.10}", closed_area(&spec))?;
    writeln!(out, "quadrature area   {quadrature:.10}  (L = {modes})")?;
    if let Some(path) = json {
        write_shape(path, &body)?;
        writeln!(out, "shape written to {}", path.display())?;
    }
    if let Some(path) = svg {
        write_atomic(path, render_svg(&body).as_bytes())?;
        writeln!(out, "svg written to {}", path.display())?;
    }
    Ok(EXIT_OK)
}

/// SVG 1.1 document with the boundary as one closed path, scaled so the body
/// fills the 512×512 view box less a 5% margin on each side.
pub fn render_svg(body: &SupportBody) -> String {
    let curve = boundary_samples(body, SVG_SAMPLES);
    let ([x0, y0], [x1, y1]) = curve.bounding_box();
    let extent = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let scale = SVG_SIZE * (1.0 - 2.0 * SVG_MARGIN) / extent;
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let mut d = String::new();
    for (i, p) in curve.points[..SVG_SAMPLES].iter().enumerate() {
        let x = SVG_SIZE / 2.0 + (p[0] - cx) * scale;
        let y = SVG_SIZE / 2.0 - (p[1] - cy) * scale;
        let _ = write!(d, "{}{x:.3} {y:.3}", if i == 0 { "M" } else { " L" });
    }
    d.push_str(" Z");
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n\
         <path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n\
         </svg>\n"
    )
}

#[derive(Clone, Debug, Default)]
pub struct OptimizeOutputs {
    pub json: Option<PathBuf>,
    pub shape: Option<PathBuf>,
    pub timestamp: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_optimize(
    dim: usize,
    width: f64,
    grid_size: usize,
    modes: Option<usize>,
    seed: u64,
    params: &MinimizeParams,
    outputs: &OptimizeOutputs,
    out: &mut dyn Write,
) -> Result<i32> {
    positive("width", width)?;
    if params.restarts == 0 {
        return Err(usage("--restarts must be at least 1"));
    }
    let modes = match (dim, modes) {
        (_, Some(l)) => l,
        (2, None) => grid_size / 4,
        (3, None) => (grid_size / 2).saturating_sub(1),
        (d, None) => return Err(usage(format!("--dim must be 2 or 3, got {d}"))),
    };
    let grid = make_grid(dim, grid_size)?;
    let result = match dim {
        2 => {
            let mut best = minimize(width, grid.clone(), modes, seed, params)?;
            let problem = Problem::new(grid.clone(), width, modes)?;
            best.minimizer = problem.canonical_align(&best.minimizer)?;
            best
        }
        3 => explore_minimize3d(width, grid.clone(), modes, seed, params)?,
        d => return Err(usage(format!("--dim must be 2 or 3, got {d}"))),
    };
    if !result.phi_value.is_finite() {
        return Err(Error::NumericalFailure("objective is not finite".into()));
    }
    let support = support_of(&result.minimizer)?;
    writeln!(out, "best of {} restarts: seed {}", params.restarts, result.restart_seed)?;
    writeln!(out, "phi               {:.10}", result.phi_value)?;
    if let Some(area) = result.area {
        let benchmark = (PI - 3f64.sqrt()) / 2.0 * width * width;
        writeln!(out, "area              {area:.10}")?;
        writeln!(out, "reuleaux triangle {benchmark:.10}")?;
        writeln!(out, "relative gap      {:.3e}", (area - benchmark) / benchmark)?;
    } else {
        let candidate = SpheroformCandidate::from_result(&result, grid_size)?;
        let r = result.minimizer.values().map(|v| v + width);
        writeln!(out, "phi1              {:.10}", candidate.phi1()?)?;
        writeln!(out, "width residual    {:.3e}", width_residual(&r, &grid, width)?)?;
        writeln!(
            out,
            "warning: at d = 3 a minimizer of phi is a candidate only; it need not bound a convex body"
        )?;
    }
    writeln!(out, "bang-bang violation {:.4}", result.bangbang_violation)?;
    writeln!(out, "sign consistency    {:.4}", result.sign_consistency)?;
    writeln!(out, "iterations {}  converged {}", result.iterations, result.converged)?;
    if let Some(path) = &outputs.json {
        let mut record = OptimizationRecord::new(&result, &support, grid_size);
        if outputs.timestamp {
            record.timestamp = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs());
        }
        write_atomic(path, record.to_json().as_bytes())?;
    }
    if let Some(path) = &outputs.shape {
        write_shape(path, &support)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_validate(
    file: &Path,
    canonical: bool,
    convexity_tol: f64,
    out: &mut dyn Write,
) -> Result<i32> {
    if !(convexity_tol >= 0.0 && convexity_tol.is_finite()) {
        return Err(usage("--convexity-tol must be a nonnegative number"));
    }
    let body = read_shape(file)?;
    let report = validate(
        &body,
        &ValidationOptions {
            convexity_tolerance: convexity_tol,
            canonical,
        },
    )?;
    write!(out, "{report}")?;
    if report.is_valid() {
        writeln!(out, "valid")?;
        Ok(EXIT_OK)
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        writeln!(out, "invalid: {}", names.join(", "))?;
        Ok(EXIT_INVARIANT)
    }
}

pub fn cmd_table(
    n_max: usize,
    width: f64,
    path: Option<&PathBuf>,
    out: &mut dyn Write,
) -> Result<i32> {
    if n_max < 3 || n_max % 2 == 0 {
        return Err(usage(format!("--max must be odd and at least 3, got {n_max}")));
    }
    positive("width", width)?;
    let table = area_table(n_max, width)?;
    if !is_strictly_increasing(&table) || table.iter().any(|&(_, a)| a >= PI * width * width / 4.0) {
        writeln!(out, "regression: areas are not strictly increasing below the disk")?;
        return Ok(EXIT_REGRESSION);
    }
    let csv = table_csv(&table);
    match path {
        Some(p) => write_atomic(p, csv.as_bytes())?,
        None => write!(out, "{csv}")?,
    }
    Ok(EXIT_OK)
}
