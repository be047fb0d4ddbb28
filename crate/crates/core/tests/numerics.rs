use approx::assert_relative_eq;
use heisenberg_ids::error::Error;
use heisenberg_ids::numerics::{
    abel_sum, integrate_adaptive, integrate_semi_infinite, integrate_semi_infinite_oscillatory, richardson_series,
    QuadratureSpec, SeriesSpec,
};
use proptest::prelude::*;

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adaptive_quadrature_is_linear(
        f in prop::collection::vec(-3.0f64..3.0, 1..8),
        g in prop::collection::vec(-3.0f64..3.0, 1..8),
        alpha in -2.0f64..2.0,
        beta in -2.0f64..2.0,
        a in -2.0f64..0.0,
        b in 0.1f64..2.0,
    ) {
        let spec = QuadratureSpec::default();
        let i_f = integrate_adaptive(|x| poly(&f, x), a, b, &spec).unwrap();
        let i_g = integrate_adaptive(|x| poly(&g, x), a, b, &spec).unwrap();
        let i_h = integrate_adaptive(|x| alpha * poly(&f, x) + beta * poly(&g, x), a, b, &spec).unwrap();
        let combined = alpha * i_f.value + beta * i_g.value;
        let budget = alpha.abs() * i_f.error_estimate + beta.abs() * i_g.error_estimate + i_h.error_estimate
            + 1e-13 * (1.0 + combined.abs());
        prop_assert!((i_h.value - combined).abs() <= budget, "{} vs {combined}", i_h.value);
    }

    #[test]
    fn abel_sum_matches_direct_sum_of_convergent_series(
        amplitude in -5.0f64..5.0,
        q in -0.9f64..0.9,
    ) {
        // Extrapolating a/(1 − q r) to r = 1 from r ≥ 1 − 2⁻⁶ is limited by its
        // pole at r = 1/q, so 1e-12 is out of reach for q near 0.9.
        let spec = SeriesSpec::default().with_tol(1e-9);
        let abel = abel_sum(|j| amplitude * q.powi(j as i32), &spec).unwrap();
        let direct = amplitude / (1.0 - q);
        prop_assert!((abel.value - direct).abs() <= spec.tol * direct.abs().max(1.0),
            "{} vs {direct}", abel.value);
    }

    #[test]
    fn zero_frequency_matches_mapped_adaptive(rate in 0.3f64..4.0, power in 0u32..4) {
        let spec = QuadratureSpec::default();
        let f = |x: f64| x.powi(power as i32) * (-rate * x).exp();
        let osc = integrate_semi_infinite_oscillatory(f, 0.0, false, &spec).unwrap();
        // x = t/(1 − t) maps [0, 1) onto the half line.
        let mapped = integrate_adaptive(|t: f64| if t >= 1.0 { 0.0 } else { f(t / (1.0 - t)) / ((1.0 - t) * (1.0 - t)) },
            0.0, 1.0, &spec).unwrap();
        let budget = osc.error_estimate + mapped.error_estimate + 1e-12 * osc.value.abs();
        prop_assert!((osc.value - mapped.value).abs() <= budget, "{} vs {}", osc.value, mapped.value);
    }

    #[test]
    fn engines_are_deterministic(rate in 0.2f64..3.0, omega in 0.1f64..5.0) {
        let spec = QuadratureSpec::default();
        let f = |x: f64| (-rate * x).exp() / (1.0 + x);
        let a = integrate_semi_infinite_oscillatory(f, omega, false, &spec).unwrap();
        let b = integrate_semi_infinite_oscillatory(f, omega, false, &spec).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
        prop_assert_eq!(a.terms_or_nodes_used, b.terms_or_nodes_used);
    }
}

#[test]
fn oscillatory_laplace_transform_of_cosine() {
    // ∫₀^∞ e^{−ax} cos(ωx) dx = a/(a² + ω²)
    let spec = QuadratureSpec::default();
    for &(a, w) in &[(1.0, 1.0), (0.2, 3.0), (2.0, 0.5)] {
        let r = integrate_semi_infinite_oscillatory(|x: f64| (-a * x).exp(), w, false, &spec).unwrap();
        assert_relative_eq!(r.value, a / (a * a + w * w), max_relative = 1e-10);
    }
}

#[test]
fn slowly_decaying_oscillatory_integral() {
    // ∫₀^∞ cos(x)/(1 + x²) dx = π/(2e)
    let r = integrate_semi_infinite_oscillatory(|x: f64| 1.0 / (1.0 + x * x), 1.0, false, &QuadratureSpec::default())
        .unwrap();
    assert_relative_eq!(r.value, std::f64::consts::PI / (2.0 * std::f64::consts::E), max_relative = 1e-9);
}

#[test]
fn semi_infinite_gaussian() {
    let r = integrate_semi_infinite(|x: f64| (-x * x).exp(), false, &QuadratureSpec::default()).unwrap();
    assert_relative_eq!(r.value, 0.5 * std::f64::consts::PI.sqrt(), max_relative = 1e-12);
}

#[test]
fn abel_sums_of_divergent_series() {
    let spec = SeriesSpec::default();
    // Σ (−1)ʲ (j + 1) = 1/4 in the Abel sense. The power sums near r = 1
    // cancel terms of size ~1/(1 − r), which caps the accuracy near 1e-10.
    let r = abel_sum(|j| if j % 2 == 0 { (j + 1) as f64 } else { -((j + 1) as f64) }, &spec).unwrap();
    assert_relative_eq!(r.value, 0.25, max_relative = 1e-9);
}

#[test]
fn richardson_recovers_basel_sum() {
    let r = richardson_series(|j| 1.0 / ((j + 1) as f64).powi(2), &[500, 1000, 2000, 4000, 8000], 1e-12).unwrap();
    assert_relative_eq!(r.value, std::f64::consts::PI.powi(2) / 6.0, max_relative = 1e-13);
}

#[test]
fn starved_budget_reports_best_value() {
    let spec = QuadratureSpec::new(1e-14, 0.0, 2, 400).unwrap();
    match integrate_adaptive(|x: f64| (50.0 * x).sin().abs(), 0.0, 3.0, &spec) {
        Err(Error::NonConvergence { value, error_estimate, .. }) => {
            assert!(value.re.is_finite() && error_estimate > 0.0);
        }
        other => panic!("expected non-convergence, got {other:?}"),
    }
}
