//! Bisection on `p` for the point where simulated survival first becomes
//! visible. Finite caps bias this, so it is a sanity check, not a bound.
//!
//! ```text
//! cargo run --release --example estimate_pc -- 3
//! ```

use frogbound::model::{theorem1_lower, theorem1_upper};
use frogbound::sim::{estimate_pc, Variant};

fn main() -> frogbound::Result<()> {
    let d: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    for variant in [Variant::Full, Variant::Oriented] {
        let est = estimate_pc(d, variant, 10_000, 500, 0.01, 11)?;
        println!(
            "{:>9}: p_c in [{:.4}, {:.4}] after {} sweeps",
            variant.to_string(),
            est.p_lo,
            est.p_hi,
            est.evaluations
        );
    }
    println!("proven: [{:.4}, {:.4}]", theorem1_lower(d), theorem1_upper(d));
    Ok(())
}
