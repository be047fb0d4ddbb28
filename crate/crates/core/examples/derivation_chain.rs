//! Step-by-step numerical audit of the passage from the integral form of the
//! Green kernel to its closed form.
//!
//! Run with `cargo run --release --example derivation_chain`.

use heisenberg_ids::green::verify_chain;
use heisenberg_ids::numerics::QuadratureSpec;

fn main() -> heisenberg_ids::error::Result<()> {
    let report = verify_chain(2, 2.0, 1.0, &QuadratureSpec::default())?;
    println!("n = {}, μ = {}, θ = {}", report.n, report.mu, report.theta);
    println!("ε = {:.15} (arccos) = {:.15} (arctan)", report.epsilon_arccos, report.epsilon_arctan);
    for step in &report.steps {
        println!("{:<22} value {:>20.12e}  residual {:.1e}", step.step, step.value, step.residual);
    }
    println!("closed form vs integral: {:.1e}", report.final_residual);
    Ok(())
}
