//! Exhaustive maximal determinants for n ≤ 6, and the sanity anchor: every
//! closed-form lower bound stays at or below the true maximum.
//!
//! ```sh
//! cargo run --release --example small_oracle
//! ```

use maxdet::oracle::{check_bounds_vs_oracle, maxdet_exhaustive};

fn main() -> maxdet::Result<()> {
    for n in 1..=6usize {
        let rec = maxdet_exhaustive(n)?;
        println!("D̄({n}) = {}", rec.dbar);
        if n == 5 {
            println!(
                "witness (first row/column normalized to +):\n{}",
                rec.witness.to_text()
            );
        }
    }

    println!("bounds vs oracle:");
    for c in check_bounds_vs_oracle()? {
        println!(
            "  n = {}: {:<22} {} ≤ {}  {}",
            c.n,
            c.label,
            c.bound,
            c.dbar,
            if c.ok { "ok" } else { "VIOLATION" }
        );
    }
    Ok(())
}
