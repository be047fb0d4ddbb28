//! Green kernel of the sub-Laplacian in closed form and from its integral
//! representation, and its relation to the fundamental solution.
//!
//! Run with `cargo run --release --example green_kernel`.

use heisenberg_ids::green::{
    folland_constant, folland_integral_representation, folland_solution, green_kernel_closed,
    green_kernel_integral, FollandConstant,
};
use heisenberg_ids::kernels::{ComplexPoint, HeisenbergPoint};
use heisenberg_ids::numerics::QuadratureSpec;
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> heisenberg_ids::error::Result<()> {
    let spec = QuadratureSpec::default();
    let p = HeisenbergPoint::new(ComplexPoint::new(vec![Complex64::new(0.6, 0.3)])?, 0.4)?;
    let o = HeisenbergPoint::identity(1);

    let closed = green_kernel_closed(&p, &o)?;
    let integral = green_kernel_integral(&p, &o, &spec)?;
    println!("ℛ₀(p, 0) closed   = {closed:.12}");
    println!("ℛ₀(p, 0) integral = {:.12} (±{:.1e})", integral.value, integral.error_estimate);

    let c = FollandConstant::green_kernel_consistent(1)?;
    println!("(√π/2)·g(p)       = {:.12}", 0.5 * PI.sqrt() * folland_solution(&p, &c)?);
    println!("g(p) by integral  = {:.12}", folland_integral_representation(&p, &spec)?.value);

    for n in 1..=3 {
        let literal = folland_constant(n, &spec)?;
        let consistent = FollandConstant::green_kernel_consistent(n)?;
        println!(
            "n = {n}: constant by quadrature {:.10}, by consistency {:.10}, ratio {:.6}",
            literal.value,
            consistent.value,
            literal.value / consistent.value
        );
    }
    Ok(())
}
