//! Gamma, log-gamma and digamma for real and complex arguments.
//!
//! Real arguments below 15 use the Lanczos sum (g = 7, nine terms). Complex
//! arguments are shifted upward with the recurrence until the real part is
//! at least 15, where Stirling's series with eight Bernoulli terms is
//! accurate to rounding. Far left of the origin the reflection formulas take
//! over.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const SHIFT_TO: f64 = 15.0;
const REFLECT_BELOW: f64 = -40.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_405_62;

/// B₂ₖ/(2k(2k−1)) for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// B₂ₖ/(2k) for k = 1..8.
const DIGAMMA_ASYMPTOTIC: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// sin(πx) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).floor();
    if r == r.round() {
        return 0.0;
    }
    if r <= 0.5 {
        (PI * r).sin()
    } else if r <= 1.5 {
        (PI * (1.0 - r)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos approximation of ln Γ(x) for x ≥ 0.5; avoids the cancellation the
/// shifted Stirling series suffers near the zeros of ln Γ at 1 and 2.
fn lanczos_ln_gamma(x: f64) -> f64 {
    let y = x - 1.0;
    let mut series = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (y + i as f64);
    }
    let t = y + LANCZOS_G + 0.5;
    HALF_LN_2PI + (y + 0.5) * t.ln() - t + series.ln()
}

fn stirling_real(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

/// ln Γ(x) for real x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    if x >= SHIFT_TO {
        return stirling_real(x);
    }
    if x >= 0.5 {
        return lanczos_ln_gamma(x);
    }
    // Γ(x) = Γ(x+1)/x keeps the Lanczos sum in its accurate range.
    lanczos_ln_gamma(x + 1.0) - x.ln()
}

/// Γ(x) for real x; NaN at the poles 0, −1, −2, ….
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) || x.is_nan() {
        return f64::NAN;
    }
    if x > 0.0 {
        if x == x.round() && x <= 23.0 {
            return (1..x as u64).fold(1.0, |acc, k| acc * k as f64);
        }
        if x > 171.7 {
            return f64::INFINITY;
        }
        return ln_gamma(x).exp();
    }
    PI / (sin_pi(x) * gamma(1.0 - x))
}

/// 1/Γ(x), which is entire: exactly 0 at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.0 {
        return sin_pi(x) * gamma(1.0 - x) / PI;
    }
    1.0 / gamma(x)
}

fn stirling_complex(z: Complex64) -> Complex64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// log Γ(z) for complex z, continuous in z off the non-positive real axis.
///
/// For Re z ≥ −40 this is the analytic continuation obtained from the
/// recurrence (the branch of `scipy.special.loggamma`); further left the
/// reflection formula is used with principal logarithms.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::DomainError(format!("log Γ of non-finite argument {z}")));
    }
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::PoleError(z));
    }
    if z.re < REFLECT_BELOW {
        let s = (z * PI).sin();
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - log_gamma(1.0 - z)?);
    }
    if z.im == 0.0 && z.re > 0.0 {
        return Ok(Complex64::new(ln_gamma(z.re), 0.0));
    }
    if z.re >= SHIFT_TO {
        return Ok(stirling_complex(z));
    }
    let mut logs = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < SHIFT_TO {
        logs += w.ln();
        w += 1.0;
    }
    Ok(stirling_complex(w) - logs)
}

/// Γ(z) for complex z.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        if is_nonpositive_integer(z.re) {
            return Err(Error::PoleError(z));
        }
        return Ok(Complex64::new(gamma(z.re), 0.0));
    }
    Ok(log_gamma(z)?.exp())
}

/// 1/Γ(z) for complex z, zero at the poles of Γ.
pub fn recip_gamma_complex(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return Complex64::new(recip_gamma(z.re), 0.0);
    }
    match log_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

fn digamma_asymptotic(z: Complex64) -> Complex64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv2;
    for c in DIGAMMA_ASYMPTOTIC {
        series += p * c;
        p *= inv2;
    }
    z.ln() - 0.5 * inv - series
}

/// ψ(z) = Γ′(z)/Γ(z) for complex z.
pub fn digamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::PoleError(z));
    }
    if z.re < REFLECT_BELOW {
        let cot = (z * PI).cos() / (z * PI).sin();
        return Ok(digamma_complex(1.0 - z)? - cot * PI);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < SHIFT_TO {
        acc += 1.0 / w;
        w += 1.0;
    }
    Ok(digamma_asymptotic(w) - acc)
}

/// ψ(x) for real x; NaN at the poles.
pub fn digamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) || x.is_nan() {
        return f64::NAN;
    }
    digamma_complex(Complex64::new(x, 0.0)).map_or(f64::NAN, |v| v.re)
}
