//! Semi-infinite integrals, plain and with a cosine factor.

use std::f64::consts::PI;

use super::quadrature::{adaptive_with_floor, singular_with_floor};
use super::series::wynn_epsilon;
use super::{finish, CompensatedSum, EndpointSingularity, EvalResult, QuadratureSpec, Scalar};
use crate::error::{Error, Result};

/// Number of trailing partial sums fed to the epsilon algorithm.
const EPSILON_WINDOW: usize = 40;

/// ∫₀^∞ f(x) dx.
///
/// [0, 1] is integrated directly (with x = t² if `singular_at_origin`),
/// [1, ∞) through x = 1 + t/(1 − t).
pub fn integrate_semi_infinite<T, F>(
    f: F,
    singular_at_origin: bool,
    spec: &QuadratureSpec,
) -> Result<EvalResult<T>>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    spec.validate()?;
    let near = if singular_at_origin {
        EndpointSingularity::Left
    } else {
        EndpointSingularity::None
    };
    let head = singular_with_floor(&f, 0.0, 1.0, near, spec, 0.0)
        .map_err(|e| e.in_context("semi-infinite quadrature [0,1]"))?;
    let floor = 0.1 * spec.tolerance_for(head.value.modulus());
    let tail = adaptive_with_floor(
        |t: f64| {
            let s = 1.0 - t;
            let fx = f(1.0 + t / s);
            if fx == T::zero() {
                fx
            } else {
                fx * (1.0 / (s * s))
            }
        },
        0.0,
        1.0,
        spec,
        floor,
    )
    .map_err(|e| e.in_context("semi-infinite quadrature [1,∞)"))?;
    let value = head.value + tail.value;
    let error = head.error_estimate + tail.error_estimate;
    finish(
        "semi-infinite quadrature",
        value,
        error,
        head.terms_or_nodes_used + tail.terms_or_nodes_used,
        spec.tolerance_for(value.modulus()).max(floor),
    )
}

/// ∫₀^∞ g(x) cos(ωx) dx for absolutely integrable g.
///
/// The half line is cut at the zeros x_k = (k + ½)π/ω of the cosine. Each
/// piece is integrated adaptively and the partial sums are extrapolated with
/// Wynn's epsilon algorithm over the last 40 of them. The result is accepted
/// once two successive extrapolations agree to tolerance while the piece
/// magnitudes are decreasing. With ω = 0 this is [`integrate_semi_infinite`].
pub fn integrate_semi_infinite_oscillatory<T, F>(
    g: F,
    frequency: f64,
    singular_at_origin: bool,
    spec: &QuadratureSpec,
) -> Result<EvalResult<T>>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    if !frequency.is_finite() || frequency < 0.0 {
        return Err(Error::InvalidSpec(format!(
            "frequency = {frequency} must be finite and ≥ 0"
        )));
    }
    if frequency == 0.0 {
        return integrate_semi_infinite(g, singular_at_origin, spec);
    }
    spec.validate()?;

    let omega = frequency;
    // Piece errors add up while piece values may cancel, so each piece is
    // integrated a decade tighter than the requested tolerance. The absolute
    // part comes only from the per-piece floors below.
    let mut piece_spec = spec.with_rel_tol(0.1 * spec.rel_tol);
    piece_spec.abs_tol = 0.0;
    let integrand = |x: f64| g(x) * (omega * x).cos();
    let node = |k: usize| (k as f64 + 0.5) * PI / omega;

    let mut pieces: Vec<T> = Vec::new();
    let mut partial: Vec<T> = Vec::new();
    let mut running = CompensatedSum::new();
    let mut quad_error = 0.0;
    let mut work = 0usize;
    let mut scale = 0.0f64;
    let mut previous: Option<T> = None;
    let mut best = (T::zero(), f64::INFINITY);

    for k in 0..spec.max_halfperiods {
        let (a, b) = if k == 0 { (0.0, node(0)) } else { (node(k - 1), node(k)) };
        // Floors shrink like 1/(k + 1)² so that their sum over all pieces
        // stays below a fifth of the tolerance.
        let floor = 0.1 * spec.tolerance_for(scale) / ((k + 1) * (k + 1)) as f64;
        let piece = if k == 0 {
            let near = if singular_at_origin {
                EndpointSingularity::Left
            } else {
                EndpointSingularity::None
            };
            singular_with_floor(&integrand, a, b, near, &piece_spec, floor)
        } else {
            adaptive_with_floor(&integrand, a, b, &piece_spec, floor)
        }
        .map_err(|e| e.in_context(&format!("oscillatory quadrature, half-period {k}")))?;
        work += piece.terms_or_nodes_used;
        quad_error += piece.error_estimate;
        pieces.push(piece.value);
        running.add(piece.value);
        let sum = running.sum();
        partial.push(sum);
        scale = scale.max(sum.modulus());

        if partial.len() < 4 {
            continue;
        }
        let start = partial.len().saturating_sub(EPSILON_WINDOW);
        let (estimate, wynn_error) = wynn_epsilon(&partial[start..]);
        let drift = previous.map_or(f64::INFINITY, |p| (estimate - p).modulus());
        previous = Some(estimate);
        let error = wynn_error.max(drift) + quad_error;
        if error < best.1 {
            best = (estimate, error);
        }
        let n = pieces.len();
        let decreasing = pieces[n - 1].modulus() <= pieces[n - 2].modulus();
        if decreasing && error <= spec.tolerance_for(estimate.modulus()) {
            return finish(
                "oscillatory quadrature",
                estimate,
                error,
                work,
                spec.tolerance_for(estimate.modulus()),
            );
        }
    }

    let window = pieces.len().min(EPSILON_WINDOW);
    let tail = &pieces[pieces.len() - window..];
    let growing = tail.windows(2).all(|w| w[1].modulus() >= w[0].modulus());
    if growing && tail[window - 1].modulus() > 0.0 {
        return Err(Error::DivergentTail { window });
    }
    Err(Error::non_convergence(
        "oscillatory quadrature: half-period budget exhausted",
        best.0,
        best.1,
        work,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn exponential_moments() {
        let spec = QuadratureSpec::default();
        let r = integrate_semi_infinite_oscillatory(|x: f64| (-x).exp(), 0.0, false, &spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate_semi_infinite_oscillatory(|x: f64| (-x).exp(), 1.0, false, &spec).unwrap();
        assert!((r.value - 0.5).abs() < 1e-10, "{}", r.value);
        let r =
            integrate_semi_infinite_oscillatory(|x: f64| x * (-2.0 * x).exp(), 3.0, false, &spec).unwrap();
        assert!((r.value + 5.0 / 169.0).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn slowly_decaying_amplitude() {
        // ∫ cos(x)/(1+x²) dx = (π/2)e^{-1}
        let spec = QuadratureSpec::default();
        let r = integrate_semi_infinite_oscillatory(|x: f64| 1.0 / (1.0 + x * x), 1.0, false, &spec)
            .unwrap();
        let exact = 0.5 * PI * (-1.0f64).exp();
        assert!((r.value - exact).abs() < 1e-9, "{} vs {exact}", r.value);
    }

    #[test]
    fn log_singular_origin() {
        // ∫ −ln(x) e^{−x} dx = γ (Euler–Mascheroni)
        let spec = QuadratureSpec::default();
        let r = integrate_semi_infinite(|x: f64| -x.ln() * (-x).exp(), true, &spec).unwrap();
        assert!((r.value - 0.577_215_664_901_532_9).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn complex_amplitude() {
        let spec = QuadratureSpec::default();
        let r = integrate_semi_infinite_oscillatory(
            |x: f64| Complex64::new(0.0, x).exp() * (-x).exp(),
            0.0,
            false,
            &spec,
        )
        .unwrap();
        // ∫ e^{(−1+i)x} dx = 1/(1−i)
        let exact = Complex64::new(0.5, 0.5);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn growing_amplitude_is_divergent_tail() {
        let spec = QuadratureSpec::new(1e-10, 1e-14, 200, 30).unwrap();
        let err = integrate_semi_infinite_oscillatory(|x: f64| x, 1.0, false, &spec).unwrap_err();
        assert!(matches!(err, Error::DivergentTail { .. }), "{err:?}");
    }

    #[test]
    fn negative_frequency_rejected() {
        let spec = QuadratureSpec::default();
        assert!(integrate_semi_infinite_oscillatory(|x: f64| (-x).exp(), -1.0, false, &spec).is_err());
    }
}
