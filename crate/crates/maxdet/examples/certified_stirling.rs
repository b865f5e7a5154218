//! Certified enclosures of ln C(2m, m): the truncated series with its
//! rigorous error term always brackets the exact big-integer logarithm.
//!
//! ```sh
//! cargo run --example certified_stirling
//! ```

use maxdet::interval::ln_bigint;
use maxdet::moments::binomial;
use maxdet::stirling::{check_mu_sigma_inequalities, ln_central_binomial, mu_interval};

fn main() -> maxdet::Result<()> {
    println!("m, k → [lo, hi] ∋ exact ln C(2m, m)");
    for (m, k) in [(1u64, 1u32), (2, 2), (10, 3), (100, 3), (498, 3)] {
        let series = ln_central_binomial(m, k)?;
        let exact = ln_bigint(&binomial(2 * m, m as i64));
        println!(
            "m = {:<4} k = {k}: [{:.12}, {:.12}] ∋ {:.12}  width {:.2e}  contains = {}",
            m,
            series.lo.to_f64(),
            series.hi.to_f64(),
            exact.midpoint_f64(),
            series.width().to_f64(),
            series.contains(&exact),
        );
    }

    // μ(h) through the series instead of the exact binomial.
    println!("\ninterval μ(h):");
    for h in [4u64, 100, 996] {
        let mu = mu_interval(h, 3)?;
        println!(
            "  h = {h:<4} μ ∈ [{:.10}, {:.10}]",
            mu.lo.to_f64(),
            mu.hi.to_f64()
        );
    }

    // The window √(2h/π) + 0.9 < μ(h) < √(2h/π) + 1, certified per order.
    let report = check_mu_sigma_inequalities(512)?;
    println!(
        "\nμ/σ² windows up to h = 512: {} orders certified, violations: {:?}",
        report.checked, report.first_violation
    );
    Ok(())
}
