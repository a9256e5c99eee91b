//! Property tests across modules.

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::body::{
    area_quadrature, area_shoelace, area_spectral, perimeter, validate, width_defect, SupportBody,
    ValidationOptions,
};
use crate::harmonic::{apply_green, make_grid, project_linear_h, GridFn, Transform};
use crate::sample::{random_h1, random_odd, random_orbiform};
use crate::shape::{body_from_json, body_to_json};
use crate::variational::{phi, MinimizeParams, Problem};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn transform_round_trip(seed in any::<u64>(), dim in 2usize..=3) {
        let (res, l) = if dim == 2 { (64, 31) } else { (24, 11) };
        let grid = make_grid(dim, res).unwrap();
        let t = Transform::new(&grid, l).unwrap();
        let c = random_h1(&mut rng(seed), dim, l);
        let back = t.analyze(&t.synthesize(&c).unwrap()).unwrap();
        prop_assert!(back.sub(&c).unwrap().norm() <= 1e-12 * c.norm().max(1.0));
    }

    #[test]
    fn odd_perturbations_keep_constant_width(seed in any::<u64>(), dim in 2usize..=3) {
        let l = if dim == 2 { 21 } else { 9 };
        let mut r = rng(seed);
        let body = SupportBody::from_deviation(1.5, &random_odd(&mut r, dim, l, 0.1)).unwrap();
        let grid = make_grid(dim, 2 * l + 4).unwrap();
        prop_assert!(width_defect(&body, &grid).unwrap() <= 1e-12);
    }

    #[test]
    fn phi_is_concave(seed in any::<u64>(), dim in 2usize..=3) {
        let (res, l) = if dim == 2 { (96, 47) } else { (16, 7) };
        let problem = Problem::new(make_grid(dim, res).unwrap(), 1.0, l).unwrap();
        let params = MinimizeParams::default();
        let x = problem.random_start(seed, &params).unwrap();
        let y = problem.random_start(seed.wrapping_add(1), &params).unwrap();
        let mid = problem.admissible(x.values().axpy(1.0, y.values()).map(|v| 0.5 * v)).unwrap();
        prop_assert!(phi(&mid) >= 0.5 * (phi(&x) + phi(&y)) - 1e-14);
        prop_assert!(phi(&x) <= 0.0);
    }

    #[test]
    fn area_scales_quadratically(seed in any::<u64>(), lambda in 0.25f64..4.0) {
        let body = random_orbiform(&mut rng(seed), 15);
        let scaled = SupportBody::new(
            lambda * body.width(),
            body.coeffs().scaled(lambda),
        ).unwrap();
        let a = area_spectral(&body).unwrap();
        let b = area_spectral(&scaled).unwrap();
        prop_assert!((b - lambda * lambda * a).abs() <= 1e-12 * b);
    }

    #[test]
    fn area_is_rigid_motion_invariant(seed in any::<u64>(), theta in 0.0f64..6.3, dx in -2.0f64..2.0, dy in -2.0f64..2.0) {
        let body = random_orbiform(&mut rng(seed), 15);
        let grid = make_grid(2, 64).unwrap();
        let moved = body.rotated(theta).unwrap().translated(dx, dy).unwrap();
        let a = area_quadrature(&body, &grid).unwrap();
        prop_assert!((area_quadrature(&moved, &grid).unwrap() - a).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn quadrature_agrees_with_shoelace(seed in any::<u64>()) {
        let body = random_orbiform(&mut rng(seed), 15);
        let a = area_quadrature(&body, &make_grid(2, 64).unwrap()).unwrap();
        prop_assert!((area_shoelace(&body, 2048) - a).abs() <= 1e-8 * a);
    }

    #[test]
    fn random_orbiforms_validate(seed in any::<u64>()) {
        let body = random_orbiform(&mut rng(seed), 15);
        prop_assert!(validate(&body, &ValidationOptions::default()).unwrap().is_valid());
    }

    #[test]
    fn green_operator_is_symmetric(seed in any::<u64>(), dim in 2usize..=3) {
        let mut r = rng(seed);
        let a = random_h1(&mut r, dim, 12);
        let b = random_h1(&mut r, dim, 12);
        let lhs = apply_green(&a).unwrap().dot(&b).unwrap();
        let rhs = a.dot(&apply_green(&b).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn linear_projection_is_self_adjoint_and_idempotent(seed in any::<u64>(), dim in 2usize..=3) {
        let mut r = rng(seed);
        let a = random_h1(&mut r, dim, 10);
        let b = random_h1(&mut r, dim, 10);
        let pa = project_linear_h(&a);
        prop_assert_eq!(project_linear_h(&pa), pa.clone());
        let lhs = pa.dot(&b).unwrap();
        let rhs = a.dot(&project_linear_h(&b)).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs().max(1.0));
    }

    #[test]
    fn admissible_projection_is_nearest_point(seed in any::<u64>(), dim in 2usize..=3, scale in 0.1f64..50.0) {
        let (res, l) = if dim == 2 { (90, 44) } else { (16, 7) };
        let problem = Problem::new(make_grid(dim, res).unwrap(), 1.0, l).unwrap();
        let grid = problem.grid().clone();
        let mut r = rng(seed);
        let f = GridFn::new(
            (0..grid.len()).map(|_| scale * rand::Rng::gen_range(&mut r, -1.0..1.0)).collect(),
        );
        let p = problem.project_admissible(&f).unwrap();
        let again = problem.project_admissible(p.values()).unwrap();
        prop_assert!(again.values().axpy(-1.0, p.values()).max_abs() <= 1e-10);
        // variational inequality ⟨f - Pf, y - Pf⟩ ≤ 0 for admissible y
        let resid = f.axpy(-1.0, p.values());
        for k in 0..4 {
            let y = problem.random_start(seed.wrapping_add(k), &MinimizeParams::default()).unwrap();
            let dir = y.values().axpy(-1.0, p.values());
            prop_assert!(grid.inner(&resid, &dir) <= 1e-9 * scale);
        }
    }

    #[test]
    fn shape_json_round_trip(seed in any::<u64>()) {
        let body = random_orbiform(&mut rng(seed), 15);
        let back = body_from_json(&body_to_json(&body)).unwrap();
        prop_assert_eq!(back.width(), body.width());
        for (m, v) in body.coeffs().modes() {
            prop_assert!((back.coeffs().get(m.degree, m.order) - v).abs() <= 1e-15 * v.abs().max(1.0));
        }
    }
}

#[test]
fn perimeter_of_random_bodies_is_pi_times_width() {
    let mut r = rng(11);
    let grid = make_grid(2, 64).unwrap();
    for _ in 0..20 {
        let body = random_orbiform(&mut r, 15);
        let p = perimeter(&body, &grid).unwrap();
        assert!((p - PI * body.width()).abs() <= 1e-12 * body.width());
    }
}
