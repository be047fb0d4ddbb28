//! Spectral projection and resolvent kernels of the magnetic Laplacian, the
//! resolvent computed both as an integral and as a sum over Landau levels.
//!
//! Run with `cargo run --example magnetic_kernels`.

use heisenberg_ids::kernels::{
    projection_kernel_magnetic, resolvent_kernel_magnetic, resolvent_series_magnetic, ComplexPoint,
};
use heisenberg_ids::numerics::{QuadratureSpec, SeriesSpec};
use num_complex::Complex64;

fn main() -> heisenberg_ids::error::Result<()> {
    let z = ComplexPoint::new(vec![Complex64::new(0.3, -0.1), Complex64::new(0.2, 0.4)])?;
    let w = ComplexPoint::new(vec![Complex64::new(-0.2, 0.5), Complex64::new(0.0, 0.1)])?;

    for lambda in [0.0, 1.0, 2.5] {
        println!("E_λ(z, w) at λ = {lambda}: {:.12}", projection_kernel_magnetic(lambda, &z, &w)?);
    }

    let zeta = Complex64::new(-1.5, 0.5);
    let integral = resolvent_kernel_magnetic(zeta, &z, &w, &QuadratureSpec::default())?;
    let series = resolvent_series_magnetic(zeta, &z, &w, &SeriesSpec::default())?;
    println!("R(ζ)(z, w), integral = {:.12} (±{:.1e})", integral.value, integral.error_estimate);
    println!("R(ζ)(z, w), series   = {:.12} (±{:.1e})", series.value, series.error_estimate);
    Ok(())
}
