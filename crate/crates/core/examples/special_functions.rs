//! Gamma, Laguerre, confluent hypergeometric, Tricomi and Legendre functions.
//!
//! Run with `cargo run --example special_functions`.

use heisenberg_ids::numerics::QuadratureSpec;
use heisenberg_ids::specfun::{
    digamma, gamma, gamma_complex, hyp1f1, laguerre, laguerre_at_zero, legendre_p, tricomi_psi,
    tricomi_psi_log_series,
};
use num_complex::Complex64;

fn main() -> heisenberg_ids::error::Result<()> {
    println!("Γ(5/2)          = {:.15}", gamma(2.5));
    println!("ψ(1)            = {:.15}", digamma(1.0));
    println!("Γ(1 + i)        = {:.15}", gamma_complex(Complex64::new(1.0, 1.0))?);
    println!("L₅^(1)(2)       = {:.15}", laguerre(5, 1.0, 2.0)?);
    println!("L₅^(1)(0)       = {:.15}", laguerre_at_zero(5, 1.0)?);
    println!("₁F₁(½; 2; 3)    = {:.15}", hyp1f1(Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0), 3.0)?);

    let a = Complex64::new(1.5, 0.25);
    let by_integral = tricomi_psi(a, 2, 1.5, &QuadratureSpec::default())?;
    let by_series = tricomi_psi_log_series(a, 2, 1.5)?;
    println!("Ψ(a; 2; 1.5)    = {:.12} (integral)", by_integral.value);
    println!("                = {:.12} (log series)", by_series);

    println!("P^(-1/2)_(1/2)(0.5) = {:.15}", legendre_p(0.5, -0.5, 0.5)?);
    Ok(())
}
