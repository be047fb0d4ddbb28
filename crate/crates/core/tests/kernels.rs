mod common;

use common::{crel, hpoint, point, rel};
use heisenberg_ids::kernels::{
    group_multiply, projection_kernel_magnetic, projection_kernel_magnetic_flat, resolvent_kernel_magnetic,
    resolvent_kernel_sub, resolvent_series_magnetic, spectral_density_kernel_sub, ComplexPoint, HeisenbergPoint,
    ReducedCoordinates,
};
use heisenberg_ids::numerics::{QuadratureSpec, SeriesSpec};
use heisenberg_ids::specfun::laguerre;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn complex_point(n: usize) -> impl Strategy<Value = ComplexPoint> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n)
        .prop_map(|v| ComplexPoint::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

fn heisenberg_point(n: usize) -> impl Strategy<Value = HeisenbergPoint> {
    (complex_point(n), -3.0f64..3.0).prop_map(|(z, t)| HeisenbergPoint::new(z, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_coordinates_are_left_invariant(
        (g, p, q) in (1usize..=3).prop_flat_map(|n| (heisenberg_point(n), heisenberg_point(n), heisenberg_point(n)))
    ) {
        let before = ReducedCoordinates::from_points(&p, &q).unwrap();
        let gp = group_multiply(&g, &p).unwrap();
        let gq = group_multiply(&g, &q).unwrap();
        let after = ReducedCoordinates::from_points(&gp, &gq).unwrap();
        prop_assert!((before.rho - after.rho).abs() <= 1e-12 * before.rho.max(1.0));
        prop_assert!((before.theta - after.theta).abs() <= 1e-12 * before.theta.abs().max(1.0));
    }

    #[test]
    fn flat_projection_kernel_is_constant_on_diagonal(z in complex_point(2)) {
        for &lambda in &[0.3, 1.0, 2.7, 5.0] {
            let origin = ComplexPoint::origin(2);
            let reference = projection_kernel_magnetic_flat(lambda, &origin, &origin).unwrap();
            let d = projection_kernel_magnetic_flat(lambda, &z, &z).unwrap();
            prop_assert!((d - reference).norm() <= 1e-14 * reference.norm());
            let level = laguerre(lambda.floor() as usize, 2.0, 0.0).unwrap() / (PI * PI);
            prop_assert!((reference.re - level).abs() <= 1e-14 * level);
        }
    }

    #[test]
    fn projection_kernel_is_hermitian(z in complex_point(2), w in complex_point(2), lambda in 0.0f64..6.0) {
        let a = projection_kernel_magnetic(lambda, &z, &w).unwrap();
        let b = projection_kernel_magnetic(lambda, &w, &z).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn telescoped_contiguity(m in 0usize..=30, n in 1u32..=5, rho in 0.0f64..10.0) {
        let n = n as f64;
        let sum: f64 = (0..=m).map(|k| laguerre(k, n - 1.0, rho).unwrap()).sum();
        let level = laguerre(m, n, rho).unwrap();
        let scale = (0..=m).map(|k| laguerre(k, n - 1.0, rho).unwrap().abs()).fold(level.abs(), f64::max).max(1.0);
        prop_assert!((sum - level).abs() <= 1e-12 * scale, "{sum} vs {level}");
    }
}

#[test]
fn raw_projection_kernel_diagonal_carries_the_fock_weight() {
    // e^{⟨z,z⟩} = e^{|z|²}: the unweighted kernel is not constant on the diagonal.
    let z = point(&[(0.7, -0.4)]);
    let d = projection_kernel_magnetic(1.5, &z, &z).unwrap();
    let expected = (z.norm_sqr()).exp() * laguerre(1, 1.0, 0.0).unwrap() / PI;
    assert!((d.re - expected).abs() < 1e-14 * expected);
}

#[test]
fn magnetic_resolvent_routes_agree_on_grid() {
    let quad = QuadratureSpec::default();
    let series = SeriesSpec::default().with_tol(1e-10);
    let w = point(&[(0.0, 0.0)]);
    for &zeta in &[-0.5, -1.3, -3.0] {
        for &rho in &[0.25f64, 1.0, 2.5] {
            let z = point(&[(rho.sqrt(), 0.0)]);
            let zeta = Complex64::new(zeta, 0.0);
            let a = resolvent_kernel_magnetic(zeta, &z, &w, &quad).unwrap().value;
            let b = resolvent_series_magnetic(zeta, &z, &w, &series).unwrap();
            assert!(crel(b.value, a) < 1e-6, "ζ={zeta} ρ={rho}: {a} vs {}", b.value);
            // The reported error must cover the actual discrepancy.
            let actual = (b.value - a).norm();
            assert!(actual <= b.error_estimate + 1e-12 * a.norm(), "ζ={zeta} ρ={rho}: {actual:e} > {:e}", b.error_estimate);
        }
    }
}

#[test]
fn magnetic_resolvent_off_real_axis() {
    let z = point(&[(0.5, 0.2), (0.1, -0.3)]);
    let w = point(&[(-0.2, 0.4), (0.3, 0.5)]);
    let zeta = Complex64::new(-0.8, 1.7);
    let a = resolvent_kernel_magnetic(zeta, &z, &w, &QuadratureSpec::default()).unwrap().value;
    let b = resolvent_series_magnetic(zeta, &z, &w, &SeriesSpec::default().with_tol(1e-10)).unwrap().value;
    assert!(crel(b, a) < 1e-6, "{a} vs {b}");
}

#[test]
fn density_kernel_depends_only_on_reduced_coordinates() {
    let spec = SeriesSpec::default();
    let p = hpoint(&[(0.4, 0.1)], 0.3);
    let q = hpoint(&[(-0.2, 0.5)], -0.6);
    let g = hpoint(&[(1.1, -0.7)], 2.0);
    let a = spectral_density_kernel_sub(1.7, &p, &q, &spec).unwrap().value;
    let gp = group_multiply(&g, &p).unwrap();
    let gq = group_multiply(&g, &q).unwrap();
    let b = spectral_density_kernel_sub(1.7, &gp, &gq, &spec).unwrap().value;
    assert!(rel(b, a) < 1e-10, "{a} vs {b}");
}

#[test]
fn sub_resolvent_tends_to_minus_green_kernel() {
    use heisenberg_ids::green::green_kernel_closed;
    let p = hpoint(&[(0.6, 0.2)], 0.5);
    let q = HeisenbergPoint::identity(1);
    let quad = QuadratureSpec::default();
    let green = green_kernel_closed(&p, &q).unwrap();
    let r = resolvent_kernel_sub(Complex64::new(-1e-6, 0.0), &p, &q, &quad).unwrap().value;
    assert!((r.re + green).abs() < 1e-4 * green, "{} vs {}", r.re, -green);
}
