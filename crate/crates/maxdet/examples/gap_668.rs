//! The four-way comparison at n = 668, the smallest multiple of 4 with no
//! known Hadamard matrix: deterministic bordering, minors from the order-672
//! neighbor, the probabilistic bordering bound, and the conjectured target.
//!
//! ```sh
//! cargo run --example gap_668
//! ```

use maxdet::bounds::{chebyshev_dbar, example_668, half_power};
use maxdet::hadamard::OrderRegistry;

fn main() -> maxdet::Result<()> {
    let reg = OrderRegistry::known_table();
    let ex = example_668(&reg)?;
    println!("n = 668 resolves to h = 664, d = 4");
    println!("  deterministic bordering  R ≥ {:.2e}", ex.bordering);
    println!("  minors from h₊ = 672     R ≥ {:.2e}", ex.minors);
    println!("  probabilistic bordering  R ≥ {:.2e}", ex.probabilistic);
    println!("  conjectured target       R ≈ {:.2e}", ex.conjectured);

    // The determinant bound itself is astronomically large; log-domain
    // scalars carry it exactly enough to print.
    let dbar = chebyshev_dbar(664, 4)?;
    println!(
        "\nprobabilistic D̄(668) bound ≈ {} (ln = {:.3})",
        dbar.to_sci(3),
        dbar.ln_mag_f64()
    );
    println!("Hadamard ceiling 668^334 ≈ {}", half_power(668).to_sci(3));
    Ok(())
}
