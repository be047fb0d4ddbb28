//! Integrated density of states of the magnetic Laplacian on ℂⁿ: the Landau
//! staircase and the jumps of the density of states.
//!
//! Run with `cargo run --example magnetic_ids`.

use heisenberg_ids::ids::{dos_magnetic_jumps, ids_magnetic};

fn main() -> heisenberg_ids::error::Result<()> {
    for n in 1..=3 {
        let row: Vec<String> = [-0.5, 0.0, 0.5, 1.0, 2.5, 4.0]
            .iter()
            .map(|&l| ids_magnetic(l, n).map(|v| format!("{:.5}", v.value)))
            .collect::<Result<_, _>>()?;
        println!("n = {n}: N(λ) at λ = −0.5, 0, 0.5, 1, 2.5, 4: {}", row.join(", "));
    }
    for jump in dos_magnetic_jumps(4.0, 2)? {
        println!("n = 2: level {} carries weight {:.6}", jump.level, jump.weight);
    }
    Ok(())
}
