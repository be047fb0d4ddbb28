//! Folland's fundamental solution of the sub-Laplacian, the Green kernel
//! ℛ₀ obtained from the resolvent at ζ = 0, and a step-by-step numerical
//! re-derivation of the closed form of ℛ₀.
//!
//! With μ = 2|z − w|² and θ the central coordinate of q⁻¹·p,
//! ℛ₀ = 2ⁿπ^{−n−½} ∫₀^∞ x^{n−1} Γ(n/2)Ψ(n/2, n; μx) e^{−μx/2} cos(θx) dx
//!    = 2^{n−1}Γ²(n/2) π^{−n−½} (ρ² + θ²)^{−n/2},  ρ = μ/2.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{HeisenbergPoint, ReducedCoordinates};
use crate::numerics::{
    integrate_adaptive, integrate_adaptive_singular, integrate_semi_infinite, integrate_semi_infinite_oscillatory,
    EndpointSingularity, EvalResult, QuadratureSpec,
};
use crate::specfun::{gamma, gamma_tricomi_integral, legendre_p, tricomi_psi_log_series};

/// Largest ξ at which the chain takes Ψ from its logarithmic series; beyond
/// it the series loses digits to cancellation.
const LOG_SERIES_MAX_XI: f64 = 6.0;

/// (|u|⁴ + τ²)^{1/4}.
pub fn homogeneous_norm(p: &HeisenbergPoint) -> f64 {
    let u2 = p.z.norm_sqr();
    (u2 * u2 + p.tau * p.tau).sqrt().sqrt()
}

/// Where a [`FollandConstant`] value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FollandRoute {
    /// [n(n+1) ∫ |u|²(|u|⁴ + t² + 1)^{−(n+4)/2} dν]^{−1} by quadrature.
    Quadrature,
    /// 2ⁿΓ²(n/2)/π^{n+1}, the value for which ℛ₀ = (√π/2)·c|·|^{−2n}.
    GreenKernelConsistency,
}

/// The constant cₙ of the fundamental solution cₙ|(u, t)|^{−2n}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FollandConstant {
    pub n: usize,
    pub value: f64,
    pub route: FollandRoute,
}

impl FollandConstant {
    /// 2ⁿΓ²(n/2)/π^{n+1}.
    pub fn green_kernel_consistent(n: usize) -> Result<Self> {
        check_n(n)?;
        let g = gamma(0.5 * n as f64);
        Ok(Self {
            n,
            value: 2f64.powi(n as i32) * g * g / PI.powi(n as i32 + 1),
            route: FollandRoute::GreenKernelConsistency,
        })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidSpec("dimension n must be ≥ 1".into()))
    } else {
        Ok(())
    }
}

/// cₙ = [n(n+1) ∫_{ℍₙ} |u|²(|u|⁴ + t² + 1)^{−(n+4)/2} dν(u, t)]^{−1}.
///
/// Radial symmetry in u reduces the integral to
/// ω ∫₀^∞ ∫_{−∞}^∞ r^{2n+1}(r⁴ + t² + 1)^{−(n+4)/2} dt dr with ω = 2πⁿ/Γ(n)
/// the area of the unit sphere of ℝ²ⁿ; both half-lines are mapped to finite
/// intervals and integrated adaptively, the t-integral nested inside the r one.
pub fn folland_constant(n: usize, spec: &QuadratureSpec) -> Result<FollandConstant> {
    Ok(folland_constant_with_error(n, spec)?.0)
}

/// [`folland_constant`] with the propagated absolute error estimate.
pub fn folland_constant_with_error(n: usize, spec: &QuadratureSpec) -> Result<(FollandConstant, f64)> {
    check_n(n)?;
    spec.validate()?;
    let power = -0.5 * (n as f64 + 4.0);
    // The t-integral shrinks like r^{−2n−6}; a purely relative inner
    // tolerance keeps the large-r tail accurate.
    let mut inner_spec = spec.with_rel_tol((0.1 * spec.rel_tol).max(1e-13));
    inner_spec.abs_tol = 0.0;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let radial = |r: f64| -> f64 {
        let a = r.powi(4) + 1.0;
        match integrate_semi_infinite(|t: f64| (a + t * t).powf(power), false, &inner_spec) {
            Ok(inner) => 2.0 * inner.value * r.powi(2 * n as i32 + 1),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let outer = integrate_semi_infinite(radial, false, spec);
    if let Some(e) = failure.into_inner() {
        return Err(e.in_context("Folland constant: t-integral"));
    }
    let outer = outer.map_err(|e| e.in_context("Folland constant: r-integral"))?;
    let sphere = 2.0 * PI.powi(n as i32) / gamma(n as f64);
    let nf = n as f64;
    let integral = sphere * outer.value;
    let value = 1.0 / (nf * (nf + 1.0) * integral);
    let error = value * outer.error_estimate / outer.value;
    Ok((
        FollandConstant {
            n,
            value,
            route: FollandRoute::Quadrature,
        },
        error,
    ))
}

/// cₙ|p|^{−2n}.
pub fn folland_solution(p: &HeisenbergPoint, c: &FollandConstant) -> Result<f64> {
    if p.dim() != c.n {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: c.n,
        });
    }
    let norm = homogeneous_norm(p);
    if norm == 0.0 {
        return Err(Error::OriginSingularity);
    }
    Ok(c.value * norm.powi(-2 * c.n as i32))
}

fn closed_prefactor(n: usize) -> f64 {
    let g = gamma(0.5 * n as f64);
    2f64.powi(n as i32 - 1) * g * g * PI.powf(-(n as f64) - 0.5)
}

/// ℛ₀(p, q) = 2^{n−1}Γ²(n/2) π^{−n−½} (ρ² + θ²)^{−n/2}.
pub fn green_kernel_closed(p: &HeisenbergPoint, q: &HeisenbergPoint) -> Result<f64> {
    let rc = ReducedCoordinates::from_points(p, q)?;
    green_kernel_closed_reduced(p.dim(), rc)
}

/// [`green_kernel_closed`] at given (ρ, θ).
pub fn green_kernel_closed_reduced(n: usize, rc: ReducedCoordinates) -> Result<f64> {
    check_n(n)?;
    let r2 = rc.rho * rc.rho + rc.theta * rc.theta;
    if r2 == 0.0 {
        return Err(Error::OriginSingularity);
    }
    Ok(closed_prefactor(n) * r2.powf(-0.5 * n as f64))
}

/// ∫₀^∞ x^{n−1} Γ(n/2)Ψ(n/2, n; μx) e^{−μx/2} cos(θx) dx, with Γ(a)Ψ supplied
/// by `gamma_psi`. The integrand is log-singular at 0 when n = 1.
fn tricomi_cosine_integral(
    n: usize,
    mu: f64,
    theta: f64,
    spec: &QuadratureSpec,
    gamma_psi: impl Fn(f64) -> Result<f64>,
) -> Result<EvalResult<f64>> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |x: f64| -> f64 {
        match gamma_psi(mu * x) {
            Ok(g) => g * x.powi(n as i32 - 1) * (-0.5 * mu * x).exp(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let result = integrate_semi_infinite_oscillatory(integrand, theta.abs(), n == 1, spec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    result
}

fn gamma_psi_integral(n: usize, spec: &QuadratureSpec) -> impl Fn(f64) -> Result<f64> {
    let inner = spec.with_rel_tol((0.1 * spec.rel_tol).max(1e-13));
    let a = Complex64::new(0.5 * n as f64, 0.0);
    move |xi: f64| Ok(gamma_tricomi_integral(a, n as u32, xi, &inner)?.value.re)
}

/// ℛ₀ from its integral over x, with Γ(n/2)Ψ(n/2, n; ·) from `specfun`.
pub fn green_kernel_integral(
    p: &HeisenbergPoint,
    q: &HeisenbergPoint,
    spec: &QuadratureSpec,
) -> Result<EvalResult<f64>> {
    let rc = ReducedCoordinates::from_points(p, q)?;
    green_kernel_integral_reduced(p.dim(), rc.mu(), rc.theta, spec)
}

/// [`green_kernel_integral`] at given μ = 2ρ and θ.
pub fn green_kernel_integral_reduced(n: usize, mu: f64, theta: f64, spec: &QuadratureSpec) -> Result<EvalResult<f64>> {
    check_n(n)?;
    spec.validate()?;
    check_mu_theta(mu, theta)?;
    let result = tricomi_cosine_integral(n, mu, theta, spec, gamma_psi_integral(n, spec))
        .map_err(|e| e.in_context("Green kernel integral"))?;
    Ok(result.scaled(2f64.powi(n as i32) * PI.powf(-(n as f64) - 0.5)))
}

fn check_mu_theta(mu: f64, theta: f64) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::DomainError(format!("Green kernel integral needs μ = 2|z − w|² > 0, got {mu}")));
    }
    if !theta.is_finite() {
        return Err(Error::DomainError(format!("θ = {theta} is not finite")));
    }
    Ok(())
}

/// π^{−n−1} 2^{n+1} Γ(n/2) ∫₀^∞ x^{n−1} e^{−x|z|²} Ψ(n/2, n; 2x|z|²) cos(τx) dx,
/// the representation of the fundamental solution at p = (z, τ) through
/// the Tricomi function.
pub fn folland_integral_representation(p: &HeisenbergPoint, spec: &QuadratureSpec) -> Result<EvalResult<f64>> {
    let n = p.dim();
    spec.validate()?;
    let mu = 2.0 * p.z.norm_sqr();
    if mu == 0.0 {
        return Err(Error::DomainError("integral representation needs |z| > 0".into()));
    }
    let result = tricomi_cosine_integral(n, mu, p.tau, spec, gamma_psi_integral(n, spec))
        .map_err(|e| e.in_context("Folland integral representation"))?;
    Ok(result.scaled(2f64.powi(n as i32 + 1) * PI.powi(-(n as i32) - 1)))
}

/// One link of the derivation chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub step: String,
    /// The quantity this step produces (ℛ₀ itself, or the integral the
    /// step evaluates).
    pub value: f64,
    /// Relative disagreement with the quantity it is derived from.
    pub residual: f64,
}

/// Numerical audit of the passage from the integral form of ℛ₀ to its closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub n: usize,
    pub mu: f64,
    pub theta: f64,
    /// arccos((1 − β)/(1 + β)) with β = (2θ/μ)².
    pub epsilon_arccos: f64,
    /// 2 arctan(2θ/μ).
    pub epsilon_arctan: f64,
    pub steps: Vec<ChainStep>,
    /// Closed form against the quadrature of the integral form.
    pub final_residual: f64,
}

impl ChainReport {
    pub fn max_residual(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| s.residual)
            .fold(self.final_residual, f64::max)
    }
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

fn step_context(step: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| e.in_context(&format!("derivation step {step}"))
}

/// Re-derives the closed form of ℛ₀ step by step, evaluating every
/// intermediate expression independently and recording how far each is from
/// the one before it.
///
/// Steps, in order: the x-integral with Ψ from its logarithmic series for ξ ≤ 6
/// (`log_series_psi`); the double integral after inserting the integral form of Γ(a)Ψ
/// (`psi_integral_form`); the t-integral after the x-integration is done in closed
/// form, together with that closed form checked on a t-grid (`x_integrated`);
/// the substitution ρ = θ/((μ/2)coth(t/2)) (`coth_substitution`); u = arctan ρ, κ = 2u
/// (`arctan_substitution`); the κ-integral against its Legendre-function value (`legendre_identity`);
/// the Legendre function against its elementary form (`gegenbauer_form`); the
/// assembled closed form (`assembly`); the duplication formula
/// (`duplication`). Needs θ > 0, since the substitutions divide by θ.
pub fn verify_chain(n: usize, mu: f64, theta: f64, spec: &QuadratureSpec) -> Result<ChainReport> {
    check_n(n)?;
    spec.validate()?;
    check_mu_theta(mu, theta)?;
    if !(theta > 0.0) {
        return Err(Error::DomainError(format!(
            "the derivation chain divides by θ and needs θ > 0, got {theta}"
        )));
    }
    let nf = n as f64;
    let half_n = 0.5 * nf;
    let pre = 2f64.powi(n as i32) * PI.powf(-nf - 0.5);
    let inner_spec = spec.with_rel_tol((0.1 * spec.rel_tol).max(1e-13));
    let mut steps = Vec::new();

    // The integral form itself, with the specfun Γ(a)Ψ.
    let reference = green_kernel_integral_reduced(n, mu, theta, spec)?.value;

    // Same integral, with Ψ from the logarithmic series where it is reliable.
    let a = Complex64::new(half_n, 0.0);
    let integral_psi = gamma_psi_integral(n, spec);
    let g_half = gamma(half_n);
    let series_psi = |xi: f64| -> Result<f64> {
        if xi <= LOG_SERIES_MAX_XI {
            Ok(tricomi_psi_log_series(a, n as u32, xi)?.re * g_half)
        } else {
            integral_psi(xi)
        }
    };
    let log_series = tricomi_cosine_integral(n, mu, theta, spec, series_psi).map_err(step_context("log_series_psi"))?.value * pre;
    steps.push(ChainStep {
        step: "log_series_psi".into(),
        value: log_series,
        residual: relative(log_series, reference),
    });

    // Γ(n/2)Ψ(n/2, n; μx) replaced by its t-integral, taken on the raw t axis.
    let direct_psi = |xi: f64| -> Result<f64> {
        let f = |t: f64| {
            if t == 0.0 {
                return 0.0;
            }
            let em1 = t.exp_m1();
            (-half_n * t - xi / em1 - nf * (-(-t).exp_m1()).ln()).exp()
        };
        // The integrand peaks near t ≈ ξ/n; split there so the narrow peak
        // of small ξ is resolved.
        let split = (xi / nf).clamp(1e-12, 0.5);
        let head = integrate_adaptive(f, 0.0, split, &inner_spec)?.value;
        let mid = integrate_adaptive(f, split, 1.0, &inner_spec)?.value;
        let tail = integrate_semi_infinite(|s: f64| f(1.0 + s), false, &inner_spec)?.value;
        Ok(head + mid + tail)
    };
    let psi_integral = tricomi_cosine_integral(n, mu, theta, spec, direct_psi).map_err(step_context("psi_integral_form"))?.value * pre;
    steps.push(ChainStep {
        step: "psi_integral_form".into(),
        value: psi_integral,
        residual: relative(psi_integral, log_series),
    });

    // x-integral in closed form; the closed form is also checked on a t-grid.
    let alpha_of = |t: f64| 0.5 * mu / (0.5 * t).tanh();
    let closed_x = |alpha: f64| gamma(nf) * (alpha * alpha + theta * theta).powf(-half_n) * (nf * (theta / alpha).atan()).cos();
    let mut identity_residual: f64 = 0.0;
    for &t in &[0.05, 0.3, 1.0, 2.5, 6.0] {
        let alpha = alpha_of(t);
        let direct = integrate_semi_infinite_oscillatory(
            |x: f64| x.powi(n as i32 - 1) * (-alpha * x).exp(),
            theta,
            false,
            spec,
        )
        .map_err(step_context("x_integrated"))?
        .value;
        identity_residual = identity_residual.max(relative(direct, closed_x(alpha)));
    }
    let x_closed = integrate_semi_infinite(
        |t: f64| {
            if t == 0.0 {
                return 0.0;
            }
            (-half_n * t).exp() * (-(-t).exp_m1()).powf(-nf) * closed_x(alpha_of(t))
        },
        false,
        spec,
    )
    .map_err(step_context("x_integrated"))?
    .value
        * pre;
    steps.push(ChainStep {
        step: "x_integrated".into(),
        value: x_closed,
        residual: relative(x_closed, psi_integral).max(identity_residual),
    });

    // ρ = θ/((μ/2)coth(t/2)) on [0, 2θ/μ].
    let big_r = 2.0 * theta / mu;
    let chain_pre = 2f64.powi(n as i32) * gamma(nf) / (mu.powi(n as i32 - 1) * theta * PI.powf(nf + 0.5));
    let edge = if n == 1 {
        EndpointSingularity::Right
    } else {
        EndpointSingularity::None
    };
    let coth_sub = integrate_adaptive_singular(
        |r: f64| {
            let q = r / big_r;
            (1.0 - q * q).max(0.0).powf(half_n - 1.0) * (1.0 + r * r).powf(-half_n) * (nf * r.atan()).cos()
        },
        0.0,
        big_r,
        edge,
        spec,
    )
    .map_err(step_context("coth_substitution"))?
    .value
        * chain_pre;
    steps.push(ChainStep {
        step: "coth_substitution".into(),
        value: coth_sub,
        residual: relative(coth_sub, x_closed),
    });

    // κ = 2 arctan ρ.
    let beta = big_r * big_r;
    let cos_eps = (1.0 - beta) / (1.0 + beta);
    let epsilon_arccos = cos_eps.acos();
    let epsilon_arctan = 2.0 * big_r.atan();
    let eps = epsilon_arctan;
    let kappa_integral = integrate_adaptive_singular(
        |k: f64| (k.cos() - cos_eps).max(0.0).powf(half_n - 1.0) * (half_n * k).cos(),
        0.0,
        eps,
        edge,
        spec,
    )
    .map_err(step_context("arctan_substitution"))?
    .value;
    let arctan_pre = 2f64.powf(half_n) * gamma(nf) / (mu.powi(n as i32 - 1) * theta * PI.powf(nf + 0.5))
        * ((beta + 1.0) / beta).powf(half_n - 1.0);
    let arctan_sub = arctan_pre * kappa_integral;
    steps.push(ChainStep {
        step: "arctan_substitution".into(),
        value: arctan_sub,
        residual: relative(arctan_sub, coth_sub),
    });

    // The κ-integral as a Legendre function, ν = (n−1)/2, a = n/2.
    let nu = 0.5 * (nf - 1.0);
    let legendre = legendre_p(nu, -nu, cos_eps).map_err(step_context("legendre_identity"))?;
    let legendre_value = (0.5 * PI).sqrt() * eps.sin().powf(nu) * g_half * legendre;
    steps.push(ChainStep {
        step: "legendre_identity".into(),
        value: legendre_value,
        residual: relative(legendre_value, kappa_integral),
    });

    // P_σ^{−σ}(cos ε) = (sin ε/2)^σ/Γ(1+σ).
    let gegenbauer = 0.5f64.powf(half_n) * PI.sqrt() * g_half / gamma(0.5 * (nf + 1.0))
        * (1.0 - cos_eps * cos_eps).powf(nu);
    steps.push(ChainStep {
        step: "gegenbauer_form".into(),
        value: gegenbauer,
        residual: relative(gegenbauer, legendre_value),
    });

    let rho = 0.5 * mu;
    let r2 = rho * rho + theta * theta;
    let assembled = arctan_pre * gegenbauer;
    let assembly = gamma(nf) * g_half / (PI.powi(n as i32) * gamma(0.5 * (nf + 1.0))) * r2.powf(-half_n);
    steps.push(ChainStep {
        step: "assembly".into(),
        value: assembly,
        residual: relative(assembly, assembled),
    });

    let closed = closed_prefactor(n) * r2.powf(-half_n);
    steps.push(ChainStep {
        step: "duplication".into(),
        value: closed,
        residual: relative(closed, assembly),
    });

    Ok(ChainReport {
        n,
        mu,
        theta,
        epsilon_arccos,
        epsilon_arctan,
        steps,
        final_residual: relative(closed, reference),
    })
}
