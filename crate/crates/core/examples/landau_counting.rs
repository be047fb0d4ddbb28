//! Eigenvalue counting for the discretized planar magnetic Laplacian on a
//! box, compared with the Landau staircase as the box grows.
//!
//! Run with `cargo run --release --example landau_counting`.

use heisenberg_ids::weylsim::{convergence_study, empirical_ids, landau_ids, GridSpec, Stencil};

fn main() -> heisenberg_ids::error::Result<()> {
    let grid = GridSpec::new(6.0, 119, 1.0)?;
    for lambda in [0.25, 0.75, 1.25, 1.75] {
        let c = empirical_ids(&grid, lambda)?;
        println!(
            "λ = {lambda}: {} states in area {}, N ≈ {:.4} (Landau {:.4})",
            c.count,
            c.volume,
            c.empirical_ids,
            landau_ids(1.0, lambda)
        );
    }

    let sizes: Vec<(f64, usize)> = [4.0, 6.0, 8.0].iter().map(|&l: &f64| (l, (20.0 * l) as usize - 1)).collect();
    for row in convergence_study(1.0, 0.5, &sizes, Stencil::Peierls)? {
        println!("L = {}: relative error {:.4}", row.count.half_width, row.rel_error);
    }
    Ok(())
}
