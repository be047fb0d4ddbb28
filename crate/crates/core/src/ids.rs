//! Integrated density of states of the magnetic Laplacian on ℂⁿ and of the
//! Heisenberg sub-Laplacian, and the jump measure of the magnetic DOS.
//!
//! Staircase convention: the magnetic IDS is right-continuous, so N(m)
//! already counts Landau level m. Both IDS vanish for λ < 0.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{spectral_density_kernel_sub_reduced, ReducedCoordinates};
use crate::numerics::{richardson_series, EvalResult, SeriesSpec};
use crate::specfun::{laguerre_at_zero, ln_gamma};

/// How an [`IdsValue`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    KernelDiagonal,
}

/// N(λ): states per unit volume below λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdsValue {
    pub lambda: f64,
    pub n: usize,
    pub value: f64,
    pub route: Route,
}

/// A point mass of the magnetic DOS at Landau level `level`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DosJump {
    pub level: usize,
    pub weight: f64,
}

/// Partial-sum counts from which γₙ is extrapolated.
const GAMMA_CHECKPOINTS: [usize; 6] = [625, 1250, 2500, 5000, 10_000, 20_000];

/// Binomial coefficient C(m + k, k) as f64: exact integer arithmetic while
/// it fits, log-gamma beyond.
fn binomial(m: usize, k: usize) -> f64 {
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc·(m+i)/i stays integral at every step.
        match acc.checked_mul(m as u128 + i) {
            Some(p) => acc = p / i,
            None => {
                let (m, k) = (m as f64, k as f64);
                return (ln_gamma(m + k + 1.0) - ln_gamma(m + 1.0) - ln_gamma(k + 1.0)).exp();
            }
        }
    }
    acc as f64
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidSpec("dimension n must be ≥ 1".into()))
    } else {
        Ok(())
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_nan() || lambda == f64::INFINITY {
        Err(Error::InvalidSpec(format!("λ = {lambda} must be finite")))
    } else {
        Ok(())
    }
}

/// N(λ) = (⌊λ⌋+n)! / (πⁿ ⌊λ⌋! n!) for λ ≥ 0, and 0 below.
pub fn ids_magnetic(lambda: f64, n: usize) -> Result<IdsValue> {
    check_n(n)?;
    check_lambda(lambda)?;
    let value = if lambda < 0.0 {
        0.0
    } else {
        binomial(lambda.floor() as usize, n) / PI.powi(n as i32)
    };
    Ok(IdsValue {
        lambda,
        n,
        value,
        route: Route::ClosedForm,
    })
}

/// Jumps of the magnetic IDS at m = 0..=⌊λ_max⌋, weight π^{−n}L_m^{(n−1)}(0).
pub fn dos_magnetic_jumps(lambda_max: f64, n: usize) -> Result<Vec<DosJump>> {
    check_n(n)?;
    if !(lambda_max >= 0.0) || !lambda_max.is_finite() {
        return Err(Error::InvalidSpec(format!("λ_max = {lambda_max} must be finite and ≥ 0")));
    }
    let scale = PI.powi(-(n as i32));
    Ok((0..=lambda_max.floor() as usize)
        .map(|m| DosJump {
            level: m,
            weight: binomial(m, n - 1) * scale,
        })
        .collect())
}

/// j-th term of Σⱼ Γ(j+n)/(Γ(n) j! (2j+n)^{n+1}) = Σⱼ L_j^{(n−1)}(0)/(2j+n)^{n+1}.
fn gamma_term(n: usize, j: usize) -> f64 {
    let l = laguerre_at_zero(j, n as f64 - 1.0).expect("order n − 1 ≥ 0 is valid");
    l * (2.0 * j as f64 + n as f64).powi(-(n as i32) - 1)
}

/// Σ_{j<J} of the γₙ terms, without the π^{−n−½} prefactor.
pub fn gamma_partial_sum(n: usize, terms: usize) -> f64 {
    (0..terms).map(|j| gamma_term(n, j)).sum()
}

/// Upper bound for Σ_{j≥J} of the γₙ terms (J ≥ 2), without the prefactor.
///
/// Each term is at most (j+n−1)^{n−1}/((n−1)! 2^{n+1} j^{n+1}), a decreasing
/// function of j, so the tail is at most its integral from J − 1.
pub fn gamma_tail_bound(n: usize, terms: usize) -> f64 {
    assert!(n >= 1 && terms >= 2, "tail bound needs n ≥ 1 and J ≥ 2");
    let a = terms as f64 - 1.0;
    let k = n - 1;
    let mut total = 0.0;
    for i in 0..=k {
        total += binomial(i, k - i) * (k as f64).powi(i as i32) * a.powi(-(i as i32) - 1) / (i as f64 + 1.0);
    }
    total * 0.5f64.powi(n as i32 + 1) / (ln_gamma(n as f64)).exp()
}

type GammaCache = RwLock<HashMap<(usize, u64), EvalResult<f64>>>;

fn gamma_cache() -> &'static GammaCache {
    static CACHE: OnceLock<GammaCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// γₙ = π^{−n−½} Γ(n)^{−1} Σⱼ Γ(j+n)/(j! (2j+n)^{n+1}), the constant in N(λ) = γₙλⁿ.
///
/// The terms behave like 2^{−n−1}j^{−2}/Γ(n), so partial sums at
/// J = 625·2ᵏ, k = 0..5, are extrapolated in 1/J (see [`gamma_tail_bound`]
/// for the remainder these extrapolations remove). Results are memoized per
/// (n, tol).
pub fn gamma_coefficient(n: usize, spec: &SeriesSpec) -> Result<EvalResult<f64>> {
    check_n(n)?;
    spec.validate()?;
    let key = (n, spec.tol.to_bits());
    if let Some(hit) = gamma_cache().read().expect("cache lock poisoned").get(&key) {
        return Ok(*hit);
    }
    let sum = richardson_series(|j| gamma_term(n, j), &GAMMA_CHECKPOINTS, spec.tol)
        .map_err(|e| e.in_context("γₙ series"))?;
    let result = sum.scaled(PI.powf(-(n as f64) - 0.5));
    gamma_cache().write().expect("cache lock poisoned").insert(key, result);
    Ok(result)
}

/// N(λ) = γₙλⁿ for the sub-Laplacian on ℍₙ; 0 for λ < 0.
pub fn ids_sub(lambda: f64, n: usize, spec: &SeriesSpec) -> Result<IdsValue> {
    check_n(n)?;
    check_lambda(lambda)?;
    let value = if lambda <= 0.0 {
        0.0
    } else {
        gamma_coefficient(n, spec)?.value * lambda.powi(n as i32)
    };
    Ok(IdsValue {
        lambda,
        n,
        value,
        route: Route::ClosedForm,
    })
}

/// N(λ) as the diagonal ρ = θ = 0 of the spectral projection kernel,
/// λⁿ π^{−n−½} Σⱼ L_j^{(n−1)}(0)/(2j+n)^{n+1}.
pub fn ids_sub_via_kernel(lambda: f64, n: usize, spec: &SeriesSpec) -> Result<IdsValue> {
    check_n(n)?;
    check_lambda(lambda)?;
    let value = if lambda <= 0.0 {
        0.0
    } else {
        let origin = ReducedCoordinates { rho: 0.0, theta: 0.0 };
        spectral_density_kernel_sub_reduced(lambda, n, origin, spec)?.value
    };
    Ok(IdsValue {
        lambda,
        n,
        value,
        route: Route::KernelDiagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn magnetic_examples() {
        assert!((ids_magnetic(0.7, 1).unwrap().value - 1.0 / PI).abs() < 1e-16);
        assert_eq!(ids_magnetic(-0.5, 3).unwrap().value, 0.0);
        assert!((ids_magnetic(2.3, 2).unwrap().value - 6.0 / (PI * PI)).abs() < 1e-16);
        // Right-continuous: N(1) counts level 1.
        assert!((ids_magnetic(1.0, 1).unwrap().value - 2.0 / PI).abs() < 1e-16);
    }

    #[test]
    fn binomial_exact_and_large() {
        assert_eq!(binomial(2, 2), 6.0);
        assert_eq!(binomial(20, 5), 53130.0);
        assert_eq!(binomial(0, 0), 1.0);
        let big = binomial(1_000_000, 40);
        let reference = (ln_gamma(1_000_041.0) - ln_gamma(1_000_001.0) - ln_gamma(41.0)).exp();
        assert!((big / reference - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dos_weights() {
        let jumps = dos_magnetic_jumps(4.5, 1).unwrap();
        assert_eq!(jumps.len(), 5);
        assert!(jumps.iter().all(|j| (j.weight - 1.0 / PI).abs() < 1e-16));
        let j2 = dos_magnetic_jumps(3.0, 2).unwrap();
        assert!((j2[1].weight - 2.0 / (PI * PI)).abs() < 1e-16);
    }

    #[test]
    fn gamma_one() {
        let g = gamma_coefficient(1, &SeriesSpec::default()).unwrap();
        assert!((g.value - PI.sqrt() / 8.0).abs() < 1e-12, "{}", g.value);
    }

    #[test]
    fn tail_bound_dominates_n1() {
        // Σ_{j≥J} (2j+1)^{−2} ≤ 1/(4(J−1)).
        assert!((gamma_tail_bound(1, 11) - 0.025).abs() < 1e-16);
    }

    #[test]
    fn sub_examples() {
        let spec = SeriesSpec::default();
        assert_eq!(ids_sub(0.0, 2, &spec).unwrap().value, 0.0);
        assert!((ids_sub(2.0, 1, &spec).unwrap().value - PI.sqrt() / 4.0).abs() < 1e-12);
        let via = ids_sub_via_kernel(1.0, 1, &spec).unwrap();
        assert_eq!(via.route, Route::KernelDiagonal);
        assert!((via.value - PI.sqrt() / 8.0).abs() < 1e-10);
    }
}
