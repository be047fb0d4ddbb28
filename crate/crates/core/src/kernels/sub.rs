//! Kernels of the sub-Laplacian on the Heisenberg group ℍₙ.
//!
//! Each kernel depends on its two points only through the reduced
//! coordinates (ρ, θ); the `_reduced` variants take those directly.

use std::cell::RefCell;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{HeisenbergPoint, ReducedCoordinates};
use crate::error::{Error, Result};
use crate::numerics::{
    gauss_legendre, integrate_semi_infinite_oscillatory, richardson_series, EvalResult, QuadratureSpec,
    SeriesSpec,
};
use crate::specfun::{gamma_tricomi_integral, laguerre, laguerre_at_zero, laguerre_series};

/// Partial-sum counts used to extrapolate the j-series of the density kernel.
const DENSITY_CHECKPOINTS: [usize; 6] = [256, 512, 1024, 2048, 4096, 8192];
/// Below this value of λρ/2 the hypergeometric form of L_j is used.
const SERIES_LAGUERRE_LIMIT: f64 = 10.0;

fn prefactor(n: usize) -> f64 {
    PI.powf(-(n as f64) - 0.5)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidSpec("dimension n must be ≥ 1".into()))
    } else {
        Ok(())
    }
}

/// Φ_λ(p, q) = λⁿ π^{−n−½} Σⱼ e^{−ρλ/(2m)} m^{−n−1} L_j^{(n−1)}(λρ/m) cos(θλ/(2m)),
/// m = 2j + n.
///
/// The terms decay like j⁻², so the series is summed to 256·2ᵏ terms,
/// k = 0..5, and the partial sums are extrapolated in 1/J.
pub fn spectral_density_kernel_sub(
    lambda: f64,
    p: &HeisenbergPoint,
    q: &HeisenbergPoint,
    spec: &SeriesSpec,
) -> Result<EvalResult<f64>> {
    let rc = ReducedCoordinates::from_points(p, q)?;
    spectral_density_kernel_sub_reduced(lambda, p.dim(), rc, spec)
}

/// [`spectral_density_kernel_sub`] at given (ρ, θ).
pub fn spectral_density_kernel_sub_reduced(
    lambda: f64,
    n: usize,
    rc: ReducedCoordinates,
    spec: &SeriesSpec,
) -> Result<EvalResult<f64>> {
    check_n(n)?;
    spec.validate()?;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidSpec(format!("spectral parameter λ = {lambda} must be ≥ 0")));
    }
    if lambda == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            error_estimate: 0.0,
            terms_or_nodes_used: 0,
            converged: true,
        });
    }
    let alpha = n as f64 - 1.0;
    let nf = n as f64;
    let c = lambda * rc.rho;
    let use_series = 0.5 * c <= SERIES_LAGUERRE_LIMIT;
    let term = |j: usize| -> f64 {
        let m = 2.0 * j as f64 + nf;
        let x = c / m;
        let l = if rc.rho == 0.0 {
            laguerre_at_zero(j, alpha)
        } else if use_series {
            laguerre_series(j, alpha, x)
        } else {
            laguerre(j, alpha, x)
        }
        .expect("order n − 1 ≥ 0 is valid");
        (-0.5 * x).exp() * m.powi(-(n as i32) - 1) * l * (rc.theta * lambda / (2.0 * m)).cos()
    };
    let sum = richardson_series(term, &DENSITY_CHECKPOINTS, spec.tol)
        .map_err(|e| e.in_context("spectral density kernel"))?;
    Ok(sum.scaled(lambda.powi(n as i32) * prefactor(n)))
}

fn check_resolvent(zeta: Complex64) -> Result<()> {
    if !(zeta.re < 0.0) || !zeta.im.is_finite() {
        return Err(Error::DomainError(format!("sub-Laplacian resolvent needs Re ζ < 0, got ζ = {zeta}")));
    }
    Ok(())
}

fn check_off_diagonal(rc: &ReducedCoordinates) -> Result<()> {
    if rc.rho == 0.0 {
        return Err(Error::DomainError(
            "resolvent kernel needs ρ = |z − w|² > 0".into(),
        ));
    }
    Ok(())
}

/// ℛ(ζ; p, q) = −2ⁿπ^{−n−½} ∫₀^∞ x^{n−1} Γ(a)Ψ(a, n; 2xρ) e^{−xρ} cos(xθ) dx,
/// a = n/2 − ζ/(2x).
///
/// The normalization 2ⁿ is the one whose ζ → 0⁻ limit is minus the Green
/// kernel (see [`crate::green::green_kernel_closed`]).
pub fn resolvent_kernel_sub(
    zeta: Complex64,
    p: &HeisenbergPoint,
    q: &HeisenbergPoint,
    spec: &QuadratureSpec,
) -> Result<EvalResult<Complex64>> {
    let rc = ReducedCoordinates::from_points(p, q)?;
    resolvent_kernel_sub_reduced(zeta, p.dim(), rc, spec)
}

/// [`resolvent_kernel_sub`] at given (ρ, θ).
pub fn resolvent_kernel_sub_reduced(
    zeta: Complex64,
    n: usize,
    rc: ReducedCoordinates,
    spec: &QuadratureSpec,
) -> Result<EvalResult<Complex64>> {
    check_n(n)?;
    check_resolvent(zeta)?;
    check_off_diagonal(&rc)?;
    let inner_spec = spec.with_rel_tol((0.1 * spec.rel_tol).max(1e-13));
    let nf = n as f64;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |x: f64| -> Complex64 {
        let a = 0.5 * nf - zeta / (2.0 * x);
        match gamma_tricomi_integral(a, n as u32, 2.0 * x * rc.rho, &inner_spec) {
            Ok(g) => g.value * (x.powi(n as i32 - 1) * (-x * rc.rho).exp()),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(f64::NAN, 0.0)
            }
        }
    };
    let result = integrate_semi_infinite_oscillatory(integrand, rc.theta.abs(), false, spec);
    if let Some(e) = failure.into_inner() {
        return Err(e.in_context("sub-Laplacian resolvent kernel"));
    }
    let result = result.map_err(|e| e.in_context("sub-Laplacian resolvent kernel"))?;
    Ok(result.scaled(Complex64::new(-(2f64.powi(n as i32)) * prefactor(n), 0.0)))
}

/// ∫₀^∞ Φ_λ(p, q)/(ζ − λ) dλ with Φ_λ the density kernel.
///
/// Φ_λ does not decay in λ, so the λ-integral is taken term by term: with
/// λ = (2j+n)y the j-th term becomes
/// I_j = π^{−n−½} ∫₀^∞ yⁿ e^{−ρy/2} L_j^{(n−1)}(ρy) cos(θy/2) / (ζ − (2j+n)y) dy,
/// which is integrated for all j at once on composite 16-point
/// Gauss–Legendre panels in v = √(ρy), with L_j from the recurrence at each
/// node.
///
/// The I_j oscillate without decaying (n ≥ 2) or decay only like 1/j
/// (n = 1), so Σ I_j is summed in the Riesz sense: the means
/// S_J = Σ_{j<J} (1 − j/J)⁵ I_j are formed at ten cutoffs J spaced by √2
/// and fitted by a + (b₁ + c₁ ln J)/J + … + (b₃ + c₃ ln J)/J³. The error
/// estimate is the change of a when the 1/J³ pair is dropped. The top cutoff
/// starts at 1500 and is doubled (within `series.max_terms`) until that
/// estimate meets `series.tol`; the panel count is checked by doubling once.
///
/// This is the spectral form exactly as written. Summed this way it equals
/// ℛ(ζ/2)/2 rather than ℛ(ζ) (the density that reproduces [`resolvent_kernel_sub`]
/// is 2Φ_{2λ}); the two routes therefore do not agree.
pub fn resolvent_sub_via_spectral(
    zeta: Complex64,
    p: &HeisenbergPoint,
    q: &HeisenbergPoint,
    series: &SeriesSpec,
    quad: &QuadratureSpec,
) -> Result<EvalResult<Complex64>> {
    let rc = ReducedCoordinates::from_points(p, q)?;
    resolvent_sub_via_spectral_reduced(zeta, p.dim(), rc, series, quad)
}

/// First top cutoff of the Riesz means over the Landau index.
const RIESZ_TOP: usize = 1500;
const RIESZ_CUTOFFS: usize = 10;
const RIESZ_ORDER: i32 = 5;

/// [`resolvent_sub_via_spectral`] at given (ρ, θ).
pub fn resolvent_sub_via_spectral_reduced(
    zeta: Complex64,
    n: usize,
    rc: ReducedCoordinates,
    series: &SeriesSpec,
    quad: &QuadratureSpec,
) -> Result<EvalResult<Complex64>> {
    check_n(n)?;
    check_resolvent(zeta)?;
    check_off_diagonal(&rc)?;
    series.validate()?;
    quad.validate()?;
    if series.max_terms < RIESZ_TOP {
        return Err(Error::InvalidSpec(format!(
            "spectral resolvent needs max_terms ≥ {RIESZ_TOP}, got {}",
            series.max_terms
        )));
    }

    let pre = prefactor(n);
    let mut top = RIESZ_TOP;
    let mut work = 0;
    loop {
        // Beyond the turning point 4j + 2α + 2 the Laguerre factor decays
        // super-exponentially; leave a margin of a few Airy widths.
        let jf = top as f64;
        let x_max = 4.0 * jf + 2.0 * n as f64 + 60.0 * jf.cbrt() + 80.0;
        let v_max = x_max.sqrt();
        let peak_frequency = 2.0 * jf.sqrt() + rc.theta.abs() * v_max / rc.rho;
        let panels = ((v_max * peak_frequency / (2.0 * PI)).ceil() as usize).max(64);

        let coarse = riesz_extrapolate(&spectral_terms(zeta, n, rc, top, v_max, panels));
        let fine = riesz_extrapolate(&spectral_terms(zeta, n, rc, top, v_max, 2 * panels));
        work += 3 * panels * 16 * top;
        let value = fine.0 * pre;
        let refinement = (fine.0 - coarse.0).norm() * pre;
        let error = fine.1 * pre + refinement;
        if refinement > quad.tolerance_for(value.norm()) {
            return Err(Error::non_convergence("spectral resolvent: panel refinement", value, error, work));
        }
        if error <= series.tol * value.norm().max(1.0) {
            return Ok(EvalResult {
                value,
                error_estimate: error,
                terms_or_nodes_used: work,
                converged: true,
            });
        }
        if 2 * top > series.max_terms {
            return Err(Error::non_convergence(
                "spectral resolvent: Riesz means over Landau index",
                value,
                error,
                work,
            ));
        }
        top *= 2;
    }
}

/// Limit of the order-5 Riesz means of Σ terms, by least squares in 1/J and
/// ln J/J; returns the limit and the change when the highest pair is dropped.
fn riesz_extrapolate(terms: &[Complex64]) -> (Complex64, f64) {
    let top = terms.len() as f64;
    let cutoffs: Vec<usize> = (0..RIESZ_CUTOFFS)
        .rev()
        .map(|k| (top * 0.5f64.powf(0.5 * k as f64)).round() as usize)
        .collect();
    let means: Vec<Complex64> = cutoffs
        .iter()
        .map(|&cut| {
            let c = cut as f64;
            terms[..cut]
                .iter()
                .enumerate()
                .map(|(j, t)| t * (1.0 - j as f64 / c).powi(RIESZ_ORDER))
                .sum()
        })
        .collect();
    let full = log_power_fit(&cutoffs, &means, 3);
    let reduced = log_power_fit(&cutoffs, &means, 2);
    (full, (full - reduced).norm())
}

/// Constant term of the least-squares fit of y(J) by
/// a + Σ_{k=1}^{order} (b_k + c_k ln J)/J^k; J is scaled by its smallest value.
fn log_power_fit(cutoffs: &[usize], y: &[Complex64], order: usize) -> Complex64 {
    let j0 = cutoffs[0] as f64;
    let cols = 1 + 2 * order;
    let design = DMatrix::from_fn(cutoffs.len(), cols, |i, c| {
        let x = j0 / cutoffs[i] as f64;
        if c == 0 {
            return 1.0;
        }
        let k = (c + 1) / 2;
        let p = x.powi(k as i32);
        if c % 2 == 1 {
            p
        } else {
            -p * x.ln()
        }
    });
    let rhs = DMatrix::from_fn(y.len(), 2, |i, c| if c == 0 { y[i].re } else { y[i].im });
    let coeffs = design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .expect("both singular-vector sets were computed");
    Complex64::new(coeffs[(0, 0)], coeffs[(0, 1)])
}

/// I_j·π^{n+½} for j = 0..j_max on `panels` uniform panels of [0, v_max].
fn spectral_terms(
    zeta: Complex64,
    n: usize,
    rc: ReducedCoordinates,
    j_max: usize,
    v_max: f64,
    panels: usize,
) -> Vec<Complex64> {
    const RESCALE: f64 = 1e100;
    let ln_rescale = RESCALE.ln();
    let (nodes, weights) = gauss_legendre(16);
    let alpha = n as f64 - 1.0;
    let nf = n as f64;
    let width = v_max / panels as f64;
    let mut acc = vec![Complex64::new(0.0, 0.0); j_max];
    for panel in 0..panels {
        let center = (panel as f64 + 0.5) * width;
        for (t, w) in nodes.iter().zip(&weights) {
            let v = center + 0.5 * width * t;
            let x = v * v;
            let y = x / rc.rho;
            // dy = 2v/ρ dv
            let base = w * 0.5 * width * (2.0 * v / rc.rho) * y.powi(n as i32) * (0.5 * rc.theta * y).cos();
            // L_j(x)e^{−x/2} = cur·e^{log_scale}, rescaled to stay in range.
            let mut log_scale = -0.5 * x;
            let mut prev = 0.0;
            let mut cur = 1.0;
            for (j, slot) in acc.iter_mut().enumerate() {
                if log_scale > -700.0 {
                    let value = base * cur * log_scale.exp();
                    *slot += value / (zeta - (2.0 * j as f64 + nf) * y);
                }
                let m = j as f64;
                let next = ((2.0 * m + 1.0 + alpha - x) * cur - (m + alpha) * prev) / (m + 1.0);
                prev = cur;
                cur = next;
                if cur.abs() > RESCALE {
                    cur /= RESCALE;
                    prev /= RESCALE;
                    log_scale += ln_rescale;
                }
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::ComplexPoint;

    fn hp(re: f64, im: f64, tau: f64) -> HeisenbergPoint {
        HeisenbergPoint::new(ComplexPoint::scalar(Complex64::new(re, im)), tau).unwrap()
    }

    #[test]
    fn density_vanishes_at_zero_energy() {
        let rc = ReducedCoordinates::new(0.3, 0.2).unwrap();
        let v = spectral_density_kernel_sub_reduced(0.0, 2, rc, &SeriesSpec::default()).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn density_diagonal_n1() {
        let p = hp(0.3, -0.1, 0.5);
        let v = spectral_density_kernel_sub(1.0, &p, &p, &SeriesSpec::default()).unwrap();
        let exact = PI.sqrt() / 8.0;
        assert!((v.value - exact).abs() < 1e-10, "{} vs {exact}", v.value);
    }

    #[test]
    fn density_theta_parity() {
        let spec = SeriesSpec::default();
        let a = spectral_density_kernel_sub_reduced(1.7, 2, ReducedCoordinates::new(0.4, 0.9).unwrap(), &spec)
            .unwrap();
        let b = spectral_density_kernel_sub_reduced(1.7, 2, ReducedCoordinates::new(0.4, -0.9).unwrap(), &spec)
            .unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn resolvent_theta_parity_and_domain() {
        let spec = QuadratureSpec::default();
        let zeta = Complex64::new(-1.0, 0.0);
        let a = resolvent_kernel_sub_reduced(zeta, 1, ReducedCoordinates::new(1.0, 0.7).unwrap(), &spec).unwrap();
        let b = resolvent_kernel_sub_reduced(zeta, 1, ReducedCoordinates::new(1.0, -0.7).unwrap(), &spec).unwrap();
        assert!((a.value - b.value).norm() < 1e-14);
        assert!(resolvent_kernel_sub_reduced(Complex64::new(0.1, 0.0), 1, ReducedCoordinates::new(1.0, 0.0).unwrap(), &spec).is_err());
        assert!(resolvent_kernel_sub_reduced(zeta, 1, ReducedCoordinates::new(0.0, 1.0).unwrap(), &spec).is_err());
    }

    #[test]
    fn spectral_route_sums_to_half_resolvent_at_half_parameter() {
        let series = SeriesSpec::default().with_tol(1e-7);
        let quad = QuadratureSpec::default();
        for (n, rho, theta, zeta) in [(1, 1.0, 0.0, -1.0), (2, 0.5, 0.3, -2.0)] {
            let rc = ReducedCoordinates::new(rho, theta).unwrap();
            let zeta = Complex64::new(zeta, 0.0);
            let spectral = resolvent_sub_via_spectral_reduced(zeta, n, rc, &series, &quad).unwrap();
            let half = resolvent_kernel_sub_reduced(zeta / 2.0, n, rc, &quad).unwrap().value / 2.0;
            assert!((spectral.value - half).norm() < 1e-7 * half.norm(), "{} vs {half}", spectral.value);
        }
    }
}
