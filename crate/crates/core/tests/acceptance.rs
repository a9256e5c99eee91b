//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use common::{arc_sector_area, relative, rng};
use orbiform::body::{
    area_quadrature, curvature_pair_defect, perimeter, width_defect, SupportBody,
};
use orbiform::cli;
use orbiform::harmonic::{
    apply_green, laplacian, make_grid, GreenMultipliers, GridFn, SpectralCoeffs, Transform,
};
use orbiform::reuleaux::{closed_area, make_spec, to_body};
use orbiform::sample::{random_h1, random_odd, random_orbiform};
use orbiform::spheroform::{ball_curvature, blaschke_volume, phi1, width_residual};
use orbiform::variational::{phi, MinimizeParams, Problem};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("orbiform").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned())
}

/// Area of the band-limited Reuleaux triangle and the closed form against the
/// arc-sector decomposition.
fn reuleaux_certificate() -> Outcome {
    let spec = make_spec(3, 1.0).unwrap();
    let body = to_body(&spec, 1024).unwrap();
    let grid = make_grid(2, 4 * 1025).unwrap();
    let target = (PI - 3f64.sqrt()) / 2.0;
    let quad = area_quadrature(&body, &grid).unwrap();
    let closed = closed_area(&spec);
    let oracle = arc_sector_area(3, 1.0);
    let e1 = (quad - target).abs();
    let e2 = (closed - oracle).abs();
    outcome(
        e1 <= 1e-5 && e2 <= 1e-12,
        format!("|quadrature - (π-√3)/2| = {e1:.2e} (tol 1e-5), |closed - arc-sector| = {e2:.2e} (tol 1e-12)"),
    )
}

fn monotone_areas() -> Outcome {
    let areas: Vec<f64> = (3..=99)
        .step_by(2)
        .map(|n| closed_area(&make_spec(n, 1.0).unwrap()))
        .collect();
    let increasing = areas.windows(2).all(|w| w[0] < w[1]);
    let below = areas.iter().all(|&a| a < PI / 4.0);
    outcome(
        increasing && below,
        format!(
            "{} odd n in 3..=99, strictly increasing: {increasing}, all below π/4: {below}, A(99) = {:.12}",
            areas.len(),
            areas.last().unwrap()
        ),
    )
}

fn width_perimeter_identities() -> Outcome {
    let mut bodies: Vec<SupportBody> = vec![SupportBody::ball(2, 1.0, 8).unwrap()];
    for n in [3, 5, 7, 9] {
        bodies.push(to_body(&make_spec(n, 1.0).unwrap(), 256).unwrap());
    }
    let mut r = rng(3);
    for _ in 0..50 {
        bodies.push(random_orbiform(&mut r, 15));
    }
    let mut worst: f64 = 0.0;
    for body in &bodies {
        let l = body.max_degree();
        let grid = make_grid(2, (4 * (l + 1)).max(64)).unwrap();
        let b = body.width();
        let wd = width_defect(body, &grid).unwrap();
        let rd = curvature_pair_defect(body, &grid).unwrap();
        let pd = (perimeter(body, &grid).unwrap() - PI * b).abs();
        worst = worst.max(wd.max(rd).max(pd) / b);
    }
    outcome(
        worst <= 1e-8,
        format!("{} bodies, worst defect / B = {worst:.2e} (tol 1e-8)", bodies.len()),
    )
}

fn green_residual() -> Outcome {
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for (dim, l) in [(2, 40), (3, 12)] {
        for _ in 0..20 {
            let f = random_h1(&mut r, dim, l);
            let gf = apply_green(&f).unwrap();
            let back = laplacian(&gf).add(&gf.scaled(dim as f64 - 1.0)).unwrap();
            worst = worst.max(back.sub(&f).unwrap().norm() / f.norm());
        }
    }
    outcome(
        worst <= 1e-10,
        format!("40 inputs (d = 2, 3), worst relative residual = {worst:.2e} (tol 1e-10)"),
    )
}

fn gradient_check() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    let params = MinimizeParams::default();
    for (dim, res, l) in [(2, 128, 63), (3, 16, 7)] {
        let problem = Problem::new(make_grid(dim, res).unwrap(), 1.0, l).unwrap();
        let t = Transform::new(problem.grid(), l).unwrap();
        for k in 0..50 {
            let x = problem.random_start(1000 + k, &params).unwrap();
            let zeta = t.synthesize(&random_odd(&mut r, dim, l, 1.0)).unwrap();
            let h = 1e-4;
            let plus = problem.phi_of(&x.values().axpy(h, &zeta)).unwrap();
            let minus = problem.phi_of(&x.values().axpy(-h, &zeta)).unwrap();
            let fd = (plus - minus) / (2.0 * h);
            let analytic = problem.grid().inner(&problem.phi_gradient(&x), &zeta);
            worst = worst.max((fd - analytic).abs() / analytic.abs().max(1e-12));
        }
    }
    outcome(
        worst <= 1e-6,
        format!("100 (point, direction) pairs, worst relative error = {worst:.2e} (tol 1e-6)"),
    )
}

fn optimizer_benchmark() -> Outcome {
    let problem = Problem::new(make_grid(2, 512).unwrap(), 1.0, 128).unwrap();
    let params = MinimizeParams {
        restarts: 16,
        epsilon: 1e-3,
        ..MinimizeParams::default()
    };
    let results = problem.minimize_restarts(7, &params).unwrap();
    let best = &results[0];
    let target = (PI - 3f64.sqrt()) / 2.0;
    let area = best.area.unwrap();
    let gap = relative(area, target);
    let a = problem.canonical_align(&results[0].minimizer).unwrap();
    let b = problem.canonical_align(&results[1].minimizer).unwrap();
    let spread = problem
        .deviation(&a)
        .axpy(-1.0, &problem.deviation(&b))
        .max_abs();
    outcome(
        gap <= 5e-3 && best.bangbang_violation < 0.01 && best.sign_consistency > 0.99 && spread <= 1e-2,
        format!(
            "area {area:.7} (gap {gap:.2e}, tol 5e-3), violation {:.4} (< 0.01), sign consistency {:.4} (> 0.99), aligned p̄ spread {spread:.2e} (tol 1e-2)",
            best.bangbang_violation, best.sign_consistency
        ),
    )
}

fn quadratic_form_of(c: &SpectralCoeffs) -> f64 {
    let g = GreenMultipliers::new(c.dim(), c.max_degree()).unwrap();
    c.modes()
        .filter_map(|(m, v)| g.get(m.degree).map(|gl| gl * v * v))
        .sum()
}

fn ball_maximality() -> Outcome {
    let params = MinimizeParams::default();
    let mut max_phi = f64::NEG_INFINITY;
    let mut zero_ok = true;
    for (dim, res, l) in [(2, 64, 31), (3, 16, 7)] {
        let problem = Problem::new(make_grid(dim, res).unwrap(), 1.0, l).unwrap();
        zero_ok &= phi(&problem.zero()) == 0.0;
        for seed in 0..1000 {
            let x = problem.random_start(seed, &params).unwrap();
            let v = phi(&x);
            // equality only at zero
            let v = if x.values().max_abs() > 0.0 { v } else { -1.0 };
            max_phi = max_phi.max(v);
        }
    }
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    let grid = make_grid(2, 128).unwrap();
    for _ in 0..50 {
        let body = random_orbiform(&mut r, 15);
        let b = body.width();
        let spectral = PI * b * b / 4.0 + quadratic_form_of(&body.curvature_deviation()) / 2.0;
        worst = worst.max((area_quadrature(&body, &grid).unwrap() - spectral).abs() / (b * b));
    }
    outcome(
        max_phi < 0.0 && zero_ok && worst <= 1e-10,
        format!(
            "2000 admissible R̄: max Φ = {max_phi:.3e} (< 0), Φ(0) = 0: {zero_ok}; area identity worst / B² = {worst:.2e} (tol 1e-10)"
        ),
    )
}

fn spheroform_consistency() -> Outcome {
    let ball = phi1(&ball_curvature(3, 1.0, 4).unwrap(), 3).unwrap();
    let phi1_err = (ball - PI / 3.0).abs();
    let exact = [0.5f64, 1.0, 2.0]
        .iter()
        .all(|&b| blaschke_volume(PI * b * b, b).unwrap() == PI * b * b * b / 6.0);
    let grid = make_grid(3, 32).unwrap();
    let t = Transform::new(&grid, 15).unwrap();
    let mut r = rng(8);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let f: GridFn = t.synthesize(&random_odd(&mut r, 3, 15, 0.05)).unwrap().map(|v| v + 1.0);
        worst = worst.max(width_residual(&f, &grid, 1.0).unwrap());
    }
    outcome(
        phi1_err <= 1e-10 && exact && worst <= 1e-12,
        format!(
            "Φ₁(ball, B=1) = {ball:.10} vs π/3 = {:.10} (err {phi1_err:.2e}, tol 1e-10); blaschke exact: {exact}; width residual worst {worst:.2e} (tol 1e-12)",
            PI / 3.0
        ),
    )
}

fn cli_contract() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut identical = true;
    for (tag, args) in [
        ("d2", vec!["--dim", "2", "--width", "1", "--grid", "512", "--modes", "128", "--restarts", "16", "--seed", "7"]),
        ("d3", vec!["--dim", "3", "--width", "1", "--grid", "24", "--restarts", "4", "--seed", "7"]),
    ] {
        let mut bytes = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{tag}-{run}.json"));
            let mut full = vec!["optimize"];
            full.extend(args.iter().copied());
            full.extend(["--out", path.to_str().unwrap()]);
            let (code, _) = run_cli(&full);
            identical &= code == 0;
            bytes.push(std::fs::read(&path).unwrap_or_default());
        }
        identical &= !bytes[0].is_empty() && bytes[0] == bytes[1];
    }

    let mut files: Vec<PathBuf> = std::fs::read_dir(fixtures())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    let (mut valid, mut invalid, mut wrong) = (0, 0, Vec::new());
    for f in &files {
        let name = f.file_name().unwrap().to_string_lossy().into_owned();
        let expected = if name.starts_with("valid_") { 0 } else { 1 };
        let (code, _) = run_cli(&["validate", f.to_str().unwrap()]);
        if code != expected {
            wrong.push(name);
        } else if code == 0 {
            valid += 1;
        } else {
            invalid += 1;
        }
    }
    let truncated = dir.path().join("truncated.json");
    std::fs::write(&truncated, r#"{ "dim": 2, "width": 1.0, "coeffs": [ { "degree": 0, "#).unwrap();
    let (trunc_code, _) = run_cli(&["validate", truncated.to_str().unwrap()]);
    outcome(
        identical && files.len() == 12 && valid == 4 && invalid == 8 && wrong.is_empty() && trunc_code == 2,
        format!(
            "optimize byte-identical: {identical}; fixtures {} (valid exit 0: {valid}/4, invalid exit 1: {invalid}/8, mismatched {wrong:?}); truncated file exit {trunc_code}",
            files.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("Reuleaux triangle certificate", Duration::from_secs(1), reuleaux_certificate),
        ("Reuleaux area monotonicity", Duration::from_secs(1), monotone_areas),
        ("width and perimeter identities", Duration::from_secs(5), width_perimeter_identities),
        ("Green operator residual", Duration::from_secs(5), green_residual),
        ("gradient of Φ", Duration::from_secs(10), gradient_check),
        ("optimizer reaches the Reuleaux triangle", Duration::from_secs(120), optimizer_benchmark),
        ("ball maximality and area identity", Duration::from_secs(10), ball_maximality),
        ("d = 3 consistency", Duration::from_secs(5), spheroform_consistency),
        ("CLI determinism and validate exit codes", Duration::from_secs(60), cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let passed = result.passed && in_time;
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {} {}: {}: {} [{:.2}s, limit {}s]",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            name,
            result.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
