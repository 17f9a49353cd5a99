//! Integer thresholds of the rounded activation for a few resolutions, and
//! the level assigned to sample weights.
//!
//! cargo run --example phi_thresholds -- "logistic:1"

use num_bigint::BigInt;
use typik::oracle::phi_at;
use typik::phi::axis_scale;
use typik::{compute_thresholds, PhiConfig};

fn main() -> typik::Result<()> {
    let phi: PhiConfig = std::env::args().nth(1).unwrap_or_else(|| "logistic".into()).parse()?;
    let precision = 3;
    println!("φ = {phi}, precision {precision}");
    for n in [1, 2, 3, 5, 9] {
        let pn = compute_thresholds(&phi, n, precision)?;
        let ks: Vec<String> = pn.thresholds().iter().map(ToString::to_string).collect();
        println!(
            "n = {n}: k = [{}] on a scale of {}",
            ks.join(", "),
            axis_scale(n, precision)
        );
    }

    let n = 5;
    let pn = compute_thresholds(&phi, n, precision)?;
    println!("\nn = {n}:");
    for real in [-3.0, -1.0, -0.4, 0.0, 0.4, 1.0, 3.0] {
        let w = BigInt::from((real * f64::from(n) * 1000.0) as i64);
        println!(
            "  x = {real:>5}  φ(x) = {:.4}  φₙ(x) = {}",
            phi_at(&phi, n, precision, &w),
            pn.apply(&w)
        );
    }
    Ok(())
}
