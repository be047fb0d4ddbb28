//! One pass/fail line per acceptance criterion. Criteria that cannot be met
//! as stated are still evaluated in full and reported as failures.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::{crel, hpoint, point, rel};
use heisenberg_ids::green::{
    folland_constant, folland_integral_representation, folland_solution, green_kernel_closed_reduced,
    green_kernel_integral_reduced, verify_chain, FollandConstant,
};
use heisenberg_ids::ids::{gamma_coefficient, ids_magnetic, ids_sub, ids_sub_via_kernel};
use heisenberg_ids::kernels::{
    resolvent_kernel_magnetic, resolvent_kernel_sub_reduced, resolvent_series_magnetic,
    resolvent_sub_via_spectral_reduced, ReducedCoordinates,
};
use heisenberg_ids::numerics::{
    abel_sum_iter, integrate_adaptive_singular, integrate_semi_infinite_oscillatory, EndpointSingularity,
    QuadratureSpec, SeriesSpec,
};
use heisenberg_ids::specfun::{gamma, gamma_tricomi_integral, hyp1f1, laguerre, laguerre_iter, legendre_p};
use heisenberg_ids::weylsim::{convergence_study, empirical_ids, GridSpec, Stencil};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Line {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn evaluate(id: u32, title: &'static str, budget_s: u64, f: impl FnOnce() -> Outcome) -> Line {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_s);
    let (passed, detail) = match outcome {
        Ok(d) => (elapsed <= budget, d),
        Err(d) => (false, d),
    };
    Line {
        id,
        title,
        passed,
        detail,
        elapsed,
        budget,
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn magnetic_ids_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_landau = 0.0f64;
    for n in 1..=5u32 {
        for m in 0..=20u64 {
            let (mut num, mut den) = (1u128, 1u128);
            for i in 1..=n as u128 {
                num *= m as u128 + i;
                den *= i;
            }
            assert_eq!(num % den, 0);
            let exact = (num / den) as f64 / PI.powi(n as i32);
            let lambda = m as f64 + 0.25;
            let v = ids_magnetic(lambda, n as usize).map_err(|e| e.to_string())?.value;
            worst = worst.max(rel(v, exact));
            if n == 1 {
                worst_landau = worst_landau.max(rel(v, (1.0 + m as f64) / PI));
            }
        }
    }
    check(
        worst <= 1e-15 && worst_landau <= 1e-15,
        format!("max rel error {worst:.1e}, n=1 vs (1+⌊λ⌋)/π {worst_landau:.1e}"),
    )
}

const CHAIN_GRID: [(f64, f64); 3] = [(1.0, 0.5), (2.0, 1.0), (4.0, 2.0)];

fn green_integral_chain() -> Outcome {
    let quad = QuadratureSpec::default();
    let mut worst = 0.0f64;
    let mut worst_chain = 0.0f64;
    for n in 1..=3 {
        for &(mu, theta) in &CHAIN_GRID {
            let integral = green_kernel_integral_reduced(n, mu, theta, &quad).map_err(|e| e.to_string())?.value;
            let closed = green_kernel_closed_reduced(n, ReducedCoordinates { rho: 0.5 * mu, theta }).unwrap();
            worst = worst.max(rel(integral, closed));
            let report = verify_chain(n, mu, theta, &quad).map_err(|e| e.to_string())?;
            worst_chain = worst_chain.max(report.max_residual());
        }
    }
    check(
        worst < 1e-6 && worst_chain < 1e-5,
        format!("integral vs closed {worst:.1e}, worst chain residual {worst_chain:.1e}"),
    )
}

/// ∫_{ℍₙ} |u|²(|u|⁴ + t² + 1)^{−(n+4)/2} dν in closed form.
fn folland_integral_closed(n: usize) -> f64 {
    let nf = n as f64;
    let sphere = 2.0 * PI.powi(n as i32) / gamma(nf);
    sphere * PI.sqrt() * gamma(0.5 * (nf + 3.0)) / gamma(0.5 * (nf + 4.0)) / (2.0 * (nf + 1.0))
}

/// The same integral by Monte Carlo over the radially reduced (r, t) plane,
/// r = a/(1 − a), t = tan(π(b − ½)), stratified in b. Returns (mean, standard error).
fn folland_integral_monte_carlo(n: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strata = 1000;
    let per_stratum = 10_000;
    let power = -0.5 * (n as f64 + 4.0);
    let (mut total, mut variance) = (0.0, 0.0);
    for k in 0..strata {
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..per_stratum {
            let a: f64 = rng.gen();
            let b = (k as f64 + rng.gen::<f64>()) / strata as f64;
            let r = a / (1.0 - a);
            let t = (PI * (b - 0.5)).tan();
            let jac = PI * (1.0 + t * t) / ((1.0 - a) * (1.0 - a));
            let v = r.powi(2 * n as i32 + 1) * (r.powi(4) + t * t + 1.0).powf(power) * jac;
            let v = if v.is_finite() { v } else { 0.0 };
            s += v;
            s2 += v * v;
        }
        let m = s / per_stratum as f64;
        let var = (s2 / per_stratum as f64 - m * m) / (per_stratum as f64 - 1.0);
        total += m / strata as f64;
        variance += var / (strata * strata) as f64;
    }
    let sphere = 2.0 * PI.powi(n as i32) / gamma(n as f64);
    (sphere * total, sphere * variance.sqrt())
}

fn folland_constant_consistency() -> Outcome {
    let quad = QuadratureSpec::default();
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 1..=3 {
        let quadrature = folland_constant(n, &quad).map_err(|e| e.to_string())?.value;
        let consistent = FollandConstant::green_kernel_consistent(n).unwrap().value;
        let nf = n as f64;
        // Independent oracles for the quadrature itself.
        let closed = 1.0 / (nf * (nf + 1.0) * folland_integral_closed(n));
        let (mc, se) = folland_integral_monte_carlo(n, 1000 + n as u64);
        let mc_constant = 1.0 / (nf * (nf + 1.0) * mc);
        let oracle_ok = rel(quadrature, closed) < 1e-8 && (quadrature - mc_constant).abs() < 5.0 * mc_constant * se / mc;
        let d = rel(quadrature, consistent);
        ok &= d < 1e-4 && oracle_ok;
        parts.push(format!(
            "n={n}: quadrature {quadrature:.8} (closed {closed:.8}, MC {mc_constant:.5}±{:.0e}) vs consistent {consistent:.8}, ratio {:.6}",
            mc_constant * se / mc,
            quadrature / consistent,
        ));
    }
    check(ok, parts.join("; "))
}

fn gamma_series() -> Outcome {
    let spec = SeriesSpec::default();
    let terms = 1_000_000usize;
    let head: f64 = (0..terms).rev().map(|j| 1.0 / ((2 * j + 1) as f64).powi(2)).sum();
    // Euler–Maclaurin remainder of Σ_{j≥J} (2j+1)^{−2}.
    let j = terms as f64;
    let tail = 1.0 / (4.0 * j) - 1.0 / (8.0 * j * j);
    let brute = (head + tail) * PI.powf(-1.5);
    let g1 = gamma_coefficient(1, &spec).map_err(|e| e.to_string())?.value;
    let e_brute = rel(g1, brute);
    let e_exact = rel(g1, PI.sqrt() / 8.0);
    let mut positive = true;
    let mut worst = 0.0f64;
    for n in 1..=4 {
        positive &= gamma_coefficient(n, &spec).map_err(|e| e.to_string())?.value > 0.0;
        for &lambda in &[0.3, 1.0, 7.5] {
            let a = ids_sub(lambda, n, &spec).map_err(|e| e.to_string())?.value;
            let b = ids_sub_via_kernel(lambda, n, &spec).map_err(|e| e.to_string())?.value;
            worst = worst.max(rel(b, a));
        }
    }
    check(
        e_brute < 1e-8 && e_exact < 1e-8 && positive && worst < 1e-8,
        format!("γ₁ vs brute force {e_brute:.1e}, vs √π/8 {e_exact:.1e}, γₙ > 0: {positive}, kernel route {worst:.1e}"),
    )
}

fn summation_formula() -> Outcome {
    let spec = SeriesSpec::default();
    let quad = QuadratureSpec::default();
    let mut worst_triples = 0.0f64;
    for &(a, c, u) in &[(1.0, 2u32, 0.5), (1.5, 3, 1.0), (2.0, 4, 2.0)] {
        let sum = abel_sum_iter(
            || {
                laguerre_iter(c as f64 - 1.0, u)
                    .unwrap()
                    .enumerate()
                    .map(move |(j, l)| l / (j as f64 + a))
            },
            &spec,
        )
        .map_err(|e| e.to_string())?;
        let direct = gamma_tricomi_integral(Complex64::new(a, 0.0), c, u, &quad).map_err(|e| e.to_string())?;
        worst_triples = worst_triples.max(rel(sum.value, direct.value.re));
    }
    let series = spec.with_tol(1e-10);
    let w = point(&[(0.0, 0.0)]);
    let mut worst_grid = 0.0f64;
    for &zeta in &[-0.5, -1.3, -3.0] {
        for &rho in &[0.25f64, 1.0, 2.5] {
            let z = point(&[(rho.sqrt(), 0.0)]);
            let zeta = Complex64::new(zeta, 0.0);
            let a = resolvent_kernel_magnetic(zeta, &z, &w, &quad).map_err(|e| e.to_string())?.value;
            let b = resolvent_series_magnetic(zeta, &z, &w, &series).map_err(|e| e.to_string())?.value;
            worst_grid = worst_grid.max(crel(b, a));
        }
    }
    check(
        worst_triples < 1e-6 && worst_grid < 1e-6,
        format!("Abel sum vs Γ(a)Ψ {worst_triples:.1e}, resolvent routes on 3×3 grid {worst_grid:.1e}"),
    )
}

fn spectral_resolvent() -> Outcome {
    let quad = QuadratureSpec::default();
    let series = SeriesSpec::default().with_tol(1e-8);
    let mut parts = Vec::new();
    let mut ok = true;
    for &(zeta, n, rho, theta) in &[(-1.0, 1usize, 1.0, 0.0), (-2.0, 2, 0.5, 0.3)] {
        let rc = ReducedCoordinates { rho, theta };
        let zeta = Complex64::new(zeta, 0.0);
        let direct = resolvent_kernel_sub_reduced(zeta, n, rc, &quad).map_err(|e| e.to_string())?.value;
        let spectral = resolvent_sub_via_spectral_reduced(zeta, n, rc, &series, &quad).map_err(|e| e.to_string())?.value;
        let half = resolvent_kernel_sub_reduced(zeta * 0.5, n, rc, &quad).map_err(|e| e.to_string())?.value * 0.5;
        let d = crel(spectral, direct);
        ok &= d < 1e-3;
        parts.push(format!(
            "ζ={} n={n}: spectral {:.8} vs direct {:.8} (rel {d:.2e}); ½R(ζ/2) = {:.8}",
            zeta.re, spectral.re, direct.re, half.re
        ));
    }
    check(ok, parts.join("; "))
}

fn folland_representation() -> Outcome {
    let quad = QuadratureSpec::default();
    let mut worst = 0.0f64;
    let points: [(&[(f64, f64)], f64); 6] = [
        (&[(0.6, 0.3)], 0.4),
        (&[(1.0, 0.0)], 0.0),
        (&[(-0.4, 0.9)], -1.3),
        (&[(1.0, 0.0), (0.0, 0.0)], 0.0),
        (&[(0.3, -0.2), (0.5, 0.4)], 0.7),
        (&[(0.8, 0.1), (-0.6, 0.2)], -2.0),
    ];
    for (coords, tau) in points {
        let p = hpoint(coords, tau);
        let c = FollandConstant::green_kernel_consistent(p.dim()).unwrap();
        let integral = folland_integral_representation(&p, &quad).map_err(|e| e.to_string())?.value;
        worst = worst.max(rel(integral, folland_solution(&p, &c).unwrap()));
    }
    check(worst < 1e-5, format!("max rel error {worst:.1e} over 3 points each for n = 1, 2"))
}

fn empirical_weyl() -> Outcome {
    let h = 0.1;
    let sizes: Vec<(f64, usize)> = [6.0f64, 8.0, 10.0]
        .iter()
        .map(|&l| (l, (2.0 * l / h).round() as usize - 1))
        .collect();
    let rows = convergence_study(1.0, 0.5, &sizes, Stencil::Peierls).map_err(|e| e.to_string())?;
    let errors: Vec<f64> = rows.iter().map(|r| r.rel_error).collect();
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let last = *errors.last().unwrap();
    let grid = GridSpec::new(8.0, 159, 1.0).unwrap();
    let [a, b, c] = [0.5, 0.9, 1.1].map(|l| empirical_ids(&grid, l).map(|r| r.empirical_ids));
    let (a, b, c) = (a.map_err(|e| e.to_string())?, b.map_err(|e| e.to_string())?, c.map_err(|e| e.to_string())?);
    let flat = (a - b).abs() < 0.1 * 0.5 * (a + b);
    let jump = c - b >= 0.5 / PI;
    check(
        last < 0.15 && decreasing && flat && jump,
        format!(
            "rel errors at L=6,8,10: {:.3}, {:.3}, {:.3}; plateau {a:.4}/{b:.4}, after first level {c:.4}",
            errors[0], errors[1], errors[2]
        ),
    )
}

fn special_function_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let quad = QuadratureSpec::default();
    let mut failures = Vec::new();
    let mut note = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    for _ in 0..200 {
        let (m, alpha, x) = (rng.gen_range(1..=50usize), rng.gen_range(1..=6) as f64, rng.gen_range(0.0..12.0));
        let lhs = laguerre(m, alpha, x).unwrap() - laguerre(m - 1, alpha, x).unwrap();
        let rhs = laguerre(m, alpha - 1.0, x).unwrap();
        note("contiguity", (lhs - rhs).abs() <= 1e-12 * laguerre(m, alpha, x).unwrap().abs().max(rhs.abs()).max(1.0));

        let (alpha, x, t) = (rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0), rng.gen_range(-0.5f64..0.5));
        let sum: f64 = (0..200).map(|j| laguerre(j, alpha, x).unwrap() * t.powi(j as i32)).sum();
        let exact = (1.0 - t).powf(-alpha - 1.0) * (-x * t / (1.0 - t)).exp();
        note("generating function", rel(sum, exact) < 1e-10);

        let (a, c, xi) = (rng.gen_range(-3.0..3.0), rng.gen_range(0.3..4.0), rng.gen_range(0.0..4.0));
        let (a, c) = (Complex64::new(a, 0.0), Complex64::new(c, 0.0));
        let lhs = hyp1f1(a, c, xi).unwrap();
        let rhs = hyp1f1(c - a, c, -xi).unwrap() * f64::exp(xi);
        note("Kummer", (lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1e-300));

        let xi: f64 = rng.gen_range(0.1..20.0);
        let dup = gamma(xi) * gamma(xi + 0.5) - 2f64.powf(1.0 - 2.0 * xi) * PI.sqrt() * gamma(2.0 * xi);
        note("duplication", dup.abs() / gamma(2.0 * xi) < 1e-12);
    }
    let laplace = QuadratureSpec {
        rel_tol: 1e-9,
        abs_tol: 1e-9,
        ..quad
    };
    for _ in 0..40 {
        let (nu, al, th) = (rng.gen_range(1.0..5.0), rng.gen_range(0.5..3.0), rng.gen_range(0.0..4.0));
        let direct = integrate_semi_infinite_oscillatory(|x: f64| x.powf(nu - 1.0) * (-al * x).exp(), th, false, &laplace)
            .unwrap()
            .value;
        let closed = gamma(nu) * (al * al + th * th).powf(-0.5 * nu) * (nu * (th / al).atan()).cos();
        note("Laplace–cosine identity", (direct - closed).abs() <= 1e-8 * closed.abs().max(1.0));
    }
    for n in 1..=4 {
        let (a, nu) = (0.5 * n as f64, 0.5 * (n as f64 - 1.0));
        let edge = if n == 1 { EndpointSingularity::Right } else { EndpointSingularity::None };
        for k in 1..=6 {
            let eps = k as f64 * PI / 8.0;
            let direct = integrate_adaptive_singular(
                |t: f64| (t.cos() - eps.cos()).max(0.0).powf(a - 1.0) * (a * t).cos(),
                0.0,
                eps,
                edge,
                &quad,
            )
            .unwrap()
            .value;
            let closed = (0.5 * PI).sqrt() * eps.sin().powf(nu) * gamma(nu + 0.5) * legendre_p(nu, -nu, eps.cos()).unwrap();
            note("Legendre integral identity", (direct - closed).abs() < 1e-8 * closed.abs().max(1.0));
        }
    }
    for sigma in [0.5, 1.0, 1.5, 2.0] {
        for eps in [PI / 6.0, PI / 3.0, PI / 2.0] {
            let p = legendre_p(sigma, -sigma, eps.cos()).unwrap();
            note("Legendre elementary form", (p - (0.5 * eps.sin()).powf(sigma) / gamma(1.0 + sigma)).abs() < 1e-10);
        }
    }
    failures.dedup();
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "contiguity, generating function, Kummer, duplication, Laplace–cosine, Legendre integral and elementary form".into()
        } else {
            format!("failing: {}", failures.join(", "))
        },
    )
}

#[test]
fn acceptance_criteria() {
    let lines = vec![
        evaluate(1, "magnetic IDS closed form", 1, magnetic_ids_closed_form),
        evaluate(2, "Green kernel integral vs closed form, derivation chain", 60, green_integral_chain),
        evaluate(3, "fundamental-solution constant by quadrature vs consistency value", 30, folland_constant_consistency),
        evaluate(4, "γₙ series and kernel-diagonal IDS", 10, gamma_series),
        evaluate(5, "Abel-summed Laguerre series and magnetic resolvent routes", 30, summation_formula),
        evaluate(6, "spectral form of the sub-Laplacian resolvent", 120, spectral_resolvent),
        evaluate(7, "Tricomi representation of the fundamental solution", 30, folland_representation),
        evaluate(8, "empirical IDS of the discretized magnetic Laplacian", 600, empirical_weyl),
        evaluate(9, "special-function property suites", 60, special_function_suites),
    ];
    for l in &lines {
        println!(
            "criterion {} {}: {} [{:.2} s of {} s] {}",
            l.id,
            if l.passed { "PASS" } else { "FAIL" },
            l.title,
            l.elapsed.as_secs_f64(),
            l.budget.as_secs(),
            l.detail
        );
    }
    let red: Vec<u32> = lines.iter().filter(|l| !l.passed).map(|l| l.id).collect();
    assert!(red.is_empty(), "failing criteria: {red:?}");
}
