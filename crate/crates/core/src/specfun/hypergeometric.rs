//! Gauss-type hypergeometric series ₁F₁ and ₂F₁.

use num_complex::Complex64;

use crate::error::{Error, Result};

const SERIES_TOL: f64 = 1e-17;
const MAX_TERMS: usize = 100_000;

fn is_nonpositive_integer(c: Complex64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.round()
}

/// Kummer's ₁F₁(a; c; ξ) = Σ (a)_k ξ^k/((c)_k k!).
///
/// The Taylor series stops after two consecutive terms below 10⁻¹⁷ of the
/// partial sum (or two exact zeros, when a is a non-positive integer). For
/// large negative ξ the alternating terms cancel; apply Kummer's
/// transformation before calling in that regime.
pub fn hyp1f1(a: Complex64, c: Complex64, xi: f64) -> Result<Complex64> {
    if is_nonpositive_integer(c) {
        return Err(Error::PoleAtC { c });
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) / (c + kf) * (xi / (kf + 1.0));
        sum += term;
        if term.norm() <= SERIES_TOL * sum.norm() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::non_convergence("₁F₁ series", sum, term.norm(), MAX_TERMS))
}

/// Gauss's ₂F₁(a, b; c; x) for real parameters and |x| < 1, by its Taylor series.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if c <= 0.0 && c == c.round() {
        return Err(Error::PoleAtC {
            c: Complex64::new(c, 0.0),
        });
    }
    if !(x.abs() < 1.0) {
        return Err(Error::DomainError(format!("₂F₁ series needs |x| < 1, got {x}")));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.abs() <= SERIES_TOL * sum.abs() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::non_convergence("₂F₁ series", sum, term.abs(), MAX_TERMS))
}
