//! Kernels of the magnetic Laplacian on ℂⁿ (unit field, Landau levels 0, 1, 2, …).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{hermitian_inner, squared_distance, ComplexPoint};
use crate::error::{Error, Result};
use crate::numerics::{abel_sum_iter, EvalResult, QuadratureSpec, SeriesSpec};
use crate::specfun::{gamma_tricomi_integral, laguerre, laguerre_iter};

/// π^{−n} e^{⟨z,w⟩} L_{⌊λ⌋}^{(n)}(|z−w|²); exactly 0 for λ < 0.
pub fn projection_kernel_magnetic(lambda: f64, z: &ComplexPoint, w: &ComplexPoint) -> Result<Complex64> {
    let inner = hermitian_inner(z, w)?;
    if lambda < 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n = z.dim();
    let rho = squared_distance(z, w)?;
    let level = laguerre(lambda.floor() as usize, n as f64, rho)?;
    Ok(inner.exp() * (level * PI.powi(-(n as i32))))
}

/// The projection kernel against Lebesgue measure:
/// e^{−(|z|²+|w|²)/2}·[`projection_kernel_magnetic`].
///
/// The Gaussian weight of the Fock-space measure is split between the two
/// arguments, which makes the diagonal equal π^{−n}L_{⌊λ⌋}^{(n)}(0) at every z.
pub fn projection_kernel_magnetic_flat(lambda: f64, z: &ComplexPoint, w: &ComplexPoint) -> Result<Complex64> {
    let inner = hermitian_inner(z, w)?;
    if lambda < 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n = z.dim();
    let rho = squared_distance(z, w)?;
    let level = laguerre(lambda.floor() as usize, n as f64, rho)?;
    let phase = inner - 0.5 * (z.norm_sqr() + w.norm_sqr());
    Ok(phase.exp() * (level * PI.powi(-(n as i32))))
}

fn check_resolvent_parameter(zeta: Complex64) -> Result<()> {
    if !zeta.re.is_finite() || !zeta.im.is_finite() {
        return Err(Error::DomainError(format!("ζ = {zeta} is not finite")));
    }
    if zeta.im == 0.0 && zeta.re >= 0.0 && zeta.re == zeta.re.round() {
        return Err(Error::SpectrumPole { zeta });
    }
    Ok(())
}

fn off_diagonal_rho(z: &ComplexPoint, w: &ComplexPoint) -> Result<f64> {
    let rho = squared_distance(z, w)?;
    if rho == 0.0 {
        return Err(Error::DomainError(
            "resolvent kernel is singular on the diagonal z = w".into(),
        ));
    }
    Ok(rho)
}

/// −π^{−n} e^{⟨z,w⟩} Γ(−ζ) Ψ(−ζ, n; |z−w|²), with Γ(−ζ)Ψ from its integral
/// representation (which needs Re ζ < 0).
pub fn resolvent_kernel_magnetic(
    zeta: Complex64,
    z: &ComplexPoint,
    w: &ComplexPoint,
    spec: &QuadratureSpec,
) -> Result<EvalResult<Complex64>> {
    check_resolvent_parameter(zeta)?;
    if !(zeta.re < 0.0) {
        return Err(Error::DomainError(format!(
            "closed-form resolvent needs Re ζ < 0, got ζ = {zeta}; use resolvent_series_magnetic"
        )));
    }
    let inner = hermitian_inner(z, w)?;
    let rho = off_diagonal_rho(z, w)?;
    let n = z.dim();
    let g = gamma_tricomi_integral(-zeta, n as u32, rho, spec)
        .map_err(|e| e.in_context("magnetic resolvent kernel"))?;
    let prefactor = -inner.exp() * PI.powi(-(n as i32));
    Ok(g.scaled(prefactor))
}

/// π^{−n} e^{⟨z,w⟩} Σⱼ L_j^{(n−1)}(ρ)/(ζ − j), summed in the Abel sense.
///
/// Valid for every ζ off the spectrum {0, 1, 2, …}.
pub fn resolvent_series_magnetic(
    zeta: Complex64,
    z: &ComplexPoint,
    w: &ComplexPoint,
    spec: &SeriesSpec,
) -> Result<EvalResult<Complex64>> {
    check_resolvent_parameter(zeta)?;
    let inner = hermitian_inner(z, w)?;
    let rho = off_diagonal_rho(z, w)?;
    let n = z.dim();
    let alpha = n as f64 - 1.0;
    laguerre_iter(alpha, rho)?;
    let sum = abel_sum_iter(
        || {
            laguerre_iter(alpha, rho)
                .expect("order checked above")
                .enumerate()
                .map(move |(j, l)| Complex64::new(l, 0.0) / (zeta - j as f64))
        },
        spec,
    )
    .map_err(|e| e.in_context("magnetic resolvent series"))?;
    Ok(sum.scaled(inner.exp() * PI.powi(-(n as i32))))
}
