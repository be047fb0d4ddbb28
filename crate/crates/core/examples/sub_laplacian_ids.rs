//! The sub-Laplacian IDS γₙλⁿ on the Heisenberg group: the constant γₙ and
//! two independent routes to N(λ).
//!
//! Run with `cargo run --release --example sub_laplacian_ids`.

use heisenberg_ids::ids::{gamma_coefficient, ids_sub, ids_sub_via_kernel};
use heisenberg_ids::numerics::SeriesSpec;

fn main() -> heisenberg_ids::error::Result<()> {
    let spec = SeriesSpec::default();
    for n in 1..=3 {
        let g = gamma_coefficient(n, &spec)?;
        let closed = ids_sub(2.0, n, &spec)?;
        let kernel = ids_sub_via_kernel(2.0, n, &spec)?;
        println!(
            "n = {n}: γ = {:.12} (±{:.1e}), N(2) = {:.12} closed form, {:.12} kernel diagonal",
            g.value, g.error_estimate, closed.value, kernel.value
        );
    }
    Ok(())
}
