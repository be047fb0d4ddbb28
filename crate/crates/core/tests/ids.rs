use heisenberg_ids::ids::{
    dos_magnetic_jumps, gamma_coefficient, gamma_partial_sum, gamma_tail_bound, ids_magnetic, ids_sub,
    ids_sub_via_kernel,
};
use heisenberg_ids::numerics::SeriesSpec;
use proptest::prelude::*;
use std::f64::consts::PI;

/// (m+n)!/(m!n!) by exact integer arithmetic.
fn binomial_exact(m: u64, n: u64) -> u128 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 1..=n as u128 {
        num *= m as u128 + i;
        den *= i;
    }
    num / den
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn staircase_is_sum_of_jumps(lambda in 0.0f64..40.0, n in 1usize..=5) {
        let jumps = dos_magnetic_jumps(lambda, n).unwrap();
        let total: f64 = jumps.iter().map(|j| j.weight).sum();
        let exact = binomial_exact(lambda.floor() as u64, n as u64) as f64 / PI.powi(n as i32);
        let v = ids_magnetic(lambda, n).unwrap().value;
        prop_assert!((v - exact).abs() <= 1e-15 * exact);
        prop_assert!((total - v).abs() <= 1e-13 * v);
    }

    #[test]
    fn sub_ids_scales_like_lambda_to_the_n(lambda in 0.01f64..50.0, t in 0.1f64..10.0, n in 1usize..=4) {
        let spec = SeriesSpec::default();
        let a = ids_sub(lambda, n, &spec).unwrap().value;
        let b = ids_sub(t * lambda, n, &spec).unwrap().value;
        prop_assert!((b - t.powi(n as i32) * a).abs() <= 1e-13 * b);
    }
}

#[test]
fn both_ids_are_nondecreasing() {
    let spec = SeriesSpec::default();
    for n in 1..=4 {
        let mut last_m = 0.0;
        let mut last_s = 0.0;
        for k in 0..=2000 {
            let lambda = -1.0 + k as f64 * 0.01;
            let m = ids_magnetic(lambda, n).unwrap().value;
            let s = ids_sub(lambda, n, &spec).unwrap().value;
            assert!(m >= last_m && s >= last_s, "n={n} λ={lambda}");
            last_m = m;
            last_s = s;
        }
    }
}

#[test]
fn gamma_one_against_brute_force() {
    // Σ_{j<J} (2j+1)^{−2} to a million terms plus the Euler–Maclaurin tail
    // Σ_{j≥J} = 1/(4J) + O(J⁻³).
    let terms = 1_000_000u64;
    let mut sum = 0.0f64;
    for j in (0..terms).rev() {
        sum += 1.0 / ((2 * j + 1) as f64).powi(2);
    }
    let tail = 1.0 / (4.0 * terms as f64);
    let brute = (sum + tail) * PI.powf(-1.5);
    assert!((brute - PI.sqrt() / 8.0).abs() < 1e-12);
    let g = gamma_coefficient(1, &SeriesSpec::default()).unwrap().value;
    assert!((g - brute).abs() < 1e-8 * brute);
    assert!((g - PI.sqrt() / 8.0).abs() < 1e-12);
}

#[test]
fn gamma_positive_and_kernel_route_agrees() {
    let spec = SeriesSpec::default();
    for n in 1..=4 {
        assert!(gamma_coefficient(n, &spec).unwrap().value > 0.0);
        for &lambda in &[0.5, 1.0, 3.7] {
            let a = ids_sub(lambda, n, &spec).unwrap().value;
            let b = ids_sub_via_kernel(lambda, n, &spec).unwrap().value;
            assert!((a - b).abs() <= 1e-8 * a, "n={n} λ={lambda}: {a} vs {b}");
        }
    }
}

#[test]
fn tail_bound_exceeds_true_remainder() {
    let spec = SeriesSpec::default();
    for n in 1..=5 {
        let full = gamma_coefficient(n, &spec).unwrap().value * PI.powf(n as f64 + 0.5);
        for &j in &[1_000usize, 10_000] {
            let head = gamma_partial_sum(n, j);
            let doubled = gamma_partial_sum(n, 2 * j) - head;
            let bound = gamma_tail_bound(n, j);
            assert!(bound >= doubled, "n={n} J={j}: {bound} < {doubled}");
            assert!(bound >= full - head, "n={n} J={j}: {bound} < {}", full - head);
        }
    }
}
