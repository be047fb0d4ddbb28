//! Abel summation of divergent series, Richardson extrapolation of slowly
//! convergent ones and acceleration of alternating partial sums.
//!
//! Run with `cargo run --example series_summation`.

use heisenberg_ids::numerics::{abel_sum, accelerate_alternating, richardson_series, SeriesSpec};
use std::f64::consts::PI;

fn main() -> heisenberg_ids::error::Result<()> {
    let spec = SeriesSpec::default().with_tol(1e-10);

    // Grandi's series 1 − 1 + 1 − … is Abel summable to ½.
    let grandi = abel_sum(|k| if k % 2 == 0 { 1.0 } else { -1.0 }, &spec)?;
    println!("Σ (−1)^k        = {:.12} (±{:.1e})", grandi.value, grandi.error_estimate);

    // Σ (−1)^k (k + 1) = ¼ in the Abel sense.
    let linear = abel_sum(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * (k as f64 + 1.0), &spec)?;
    println!("Σ (−1)^k (k+1)  = {:.12} (±{:.1e})", linear.value, linear.error_estimate);

    // Σ 1/(k+1)² converges like 1/K; extrapolation in 1/K recovers π²/6.
    let basel = richardson_series(|k| 1.0 / ((k + 1) as f64).powi(2), &[100, 200, 400, 800, 1600], 1e-12)?;
    println!("Σ 1/k²          = {:.12} vs π²/6 = {:.12}", basel.value, PI * PI / 6.0);

    // Leibniz series for π/4 from 20 partial sums.
    let partial: Vec<f64> = (0..20)
        .scan(0.0, |s, k| {
            *s += if k % 2 == 0 { 1.0 } else { -1.0 } / (2 * k + 1) as f64;
            Some(*s)
        })
        .collect();
    let leibniz = accelerate_alternating(&partial)?;
    println!("Σ (−1)^k/(2k+1) = {:.12} vs π/4  = {:.12}", leibniz.value, PI / 4.0);
    Ok(())
}
