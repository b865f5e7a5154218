//! Reproduce the two comparison tables: the asymptotic coefficients and the
//! d = 2 ratio bounds at n ∈ {10, 14, 18, 98, 998}.
//!
//! ```sh
//! cargo run --example reproduce_tables
//! ```

use maxdet::bounds::{table1, table2};
use maxdet::hadamard::OrderRegistry;

fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.4}"),
        None => "-".into(),
    }
}

fn main() -> maxdet::Result<()> {
    println!("asymptotics of the ratio bounds (coeff / n^exp):");
    println!(
        "{:>2} {:>16} {:>16} {:>8}",
        "d", "minors-based", "bordering", "limit"
    );
    for row in table1() {
        let kms = format!("{:.4}/n^{}", row.kms_coeff, row.kms_exponent);
        let bo = if row.bo_exponent == 0.0 {
            format!("{:.4}", row.bo_coeff)
        } else {
            format!("{:.4}/n^{}", row.bo_coeff, row.bo_exponent)
        };
        println!("{:>2} {kms:>16} {bo:>16} {:>8.4}", row.d, row.limit_const);
    }

    let reg = OrderRegistry::known_table();
    println!("\nlower bounds on R(n) at d = 2:");
    println!(
        "{:>6} {:>8} {:>8} {:>10} {:>10}",
        "n", "kms", "bo", "chebyshev", "small-gap"
    );
    for row in table2(&reg)? {
        println!(
            "{:>6} {:>8} {:>8} {:>10} {:>10}",
            row.label,
            cell(row.kms),
            cell(row.bo),
            cell(row.chebyshev),
            cell(row.small_gap)
        );
    }
    Ok(())
}
