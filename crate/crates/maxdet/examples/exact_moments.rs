//! Exact rational moments of the bordered construction: the diagonal mean
//! μ(h), its variance σ²(h), and the double-sum identity behind them.
//!
//! ```sh
//! cargo run --example exact_moments
//! ```

use maxdet::moments::{e_abs_s1s2, moments, rational_to_f64, sigma2_exact, to_decimal_sig};

fn main() -> maxdet::Result<()> {
    for h in [4u64, 8, 12, 16, 96, 996] {
        let m = moments(h)?;
        println!(
            "h = {:<4} mu = {:<12} = {}  sigma2 = {}",
            h,
            m.mu.to_string(),
            to_decimal_sig(&m.mu, 15),
            to_decimal_sig(&m.sigma2, 15),
        );
    }

    // E[|S1·S2|] two ways: brute-force double sum vs closed form; the call
    // itself asserts they agree exactly.
    println!("\nE[|S1 S2|] at h = 4k:");
    for k in 1..=6u64 {
        let v = e_abs_s1s2(k);
        println!("  k = {k}: {v} = {}", to_decimal_sig(&v, 10));
    }

    // σ² decreases toward 1 − 3/π ≈ 0.04507.
    let limit = 1.0 - 3.0 / std::f64::consts::PI;
    println!("\nsigma²(h) vs the 1 − 3/π ≈ {limit:.5} limit:");
    for h in [64u64, 256, 1024] {
        let s = rational_to_f64(&sigma2_exact(h)?);
        println!("  h = {h:<5} sigma² = {s:.5}");
    }
    Ok(())
}
