//! Build Hadamard matrices three ways, verify them exactly, and resolve
//! gaps against the order registry.
//!
//! ```sh
//! cargo run --example construct_hadamard
//! ```

use maxdet::hadamard::{kronecker, paley_i, paley_ii, sylvester, OrderRegistry};

fn main() -> maxdet::Result<()> {
    // Doubling construction: order 2^k.
    let h8 = sylvester(3)?;
    println!(
        "sylvester(3): order {}, hadamard = {}",
        h8.order(),
        h8.is_hadamard()
    );

    // Quadratic-residue constructions: orders q+1 and 2(q+1).
    let h12 = paley_i(11)?;
    println!(
        "paley_i(11):  order {}, hadamard = {}",
        h12.order(),
        h12.is_hadamard()
    );
    let h28 = paley_ii(13)?;
    println!(
        "paley_ii(13): order {}, hadamard = {}",
        h28.order(),
        h28.is_hadamard()
    );

    // Kronecker products multiply orders.
    let h96 = kronecker(&h8, &h12)?;
    println!(
        "8 ⊗ 12:       order {}, hadamard = {}",
        h96.order(),
        h96.is_hadamard()
    );

    // The text exchange format round-trips.
    println!("\norder-12 core in text form:\n{}", h12.to_text());

    // Gap resolution: the largest registered order ≤ n.
    let reg = OrderRegistry::known_table();
    for n in [5u64, 13, 98, 131, 668, 998] {
        let (h, d) = reg.resolve_gap(n)?;
        println!("n = {n:<4} → h = {h:<4} d = {d}");
    }

    // Constructible mode carries recipes and certificates.
    let constructible = OrderRegistry::constructible(64);
    let cert = constructible.cert(24)?;
    println!(
        "\norder 24 via {}, verified = {}",
        cert.recipe.describe(),
        cert.verified
    );
    Ok(())
}
