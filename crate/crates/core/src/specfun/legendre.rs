//! Ferrers (on-the-cut) Legendre function of the first kind.

use num_complex::Complex64;

use super::gamma::recip_gamma;
use super::hypergeometric::hyp2f1;
use crate::error::{Error, Result};

/// P^ν_λ(x) for |x| < 1 in the hypergeometric form
/// Γ(1−ν)⁻¹·((1+x)/(1−x))^{ν/2}·₂F₁(−λ, λ+1; 1−ν; (1−x)/2).
///
/// 1 − ν must not be a non-positive integer; integer ν ≥ 1 is the
/// associated-Legendre case, which this form does not cover.
pub fn legendre_p(lambda: f64, nu: f64, x: f64) -> Result<f64> {
    let c = 1.0 - nu;
    if c <= 0.0 && c == c.round() {
        return Err(Error::PoleError(Complex64::new(c, 0.0)));
    }
    if !(x.abs() < 1.0) {
        return Err(Error::DomainError(format!("Legendre P needs |x| < 1, got {x}")));
    }
    let f = hyp2f1(-lambda, lambda + 1.0, c, 0.5 * (1.0 - x))?;
    Ok(recip_gamma(c) * ((1.0 + x) / (1.0 - x)).powf(0.5 * nu) * f)
}
