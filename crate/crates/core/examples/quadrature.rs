//! Adaptive, endpoint-singular and oscillatory semi-infinite quadrature.
//!
//! Run with `cargo run --example quadrature`.

use heisenberg_ids::numerics::{
    integrate_adaptive, integrate_adaptive_singular, integrate_semi_infinite_oscillatory, EndpointSingularity,
    QuadratureSpec,
};
use std::f64::consts::PI;

fn main() -> heisenberg_ids::error::Result<()> {
    let spec = QuadratureSpec::default();

    let smooth = integrate_adaptive(|x: f64| x.sin(), 0.0, PI, &spec)?;
    println!("∫₀^π sin x dx        = {:.15} (±{:.1e}, {} nodes)", smooth.value, smooth.error_estimate, smooth.terms_or_nodes_used);

    let singular = integrate_adaptive_singular(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, EndpointSingularity::Left, &spec)?;
    println!("∫₀¹ x^(-1/2) dx      = {:.15} (±{:.1e})", singular.value, singular.error_estimate);

    // ∫₀^∞ e^{−x} cos(2x) dx = 1/5.
    let osc = integrate_semi_infinite_oscillatory(|x: f64| (-x).exp(), 2.0, false, &spec)?;
    println!("∫₀^∞ e^(-x)cos 2x dx = {:.15} (±{:.1e})", osc.value, osc.error_estimate);
    Ok(())
}
