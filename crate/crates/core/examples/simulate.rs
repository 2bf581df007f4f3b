//! Survival frequencies of the full and oriented frog models on `T_2`
//! around the critical window, with Wilson intervals.
//!
//! ```text
//! cargo run --release --example simulate
//! ```

use frogbound::model::{theorem1_lower, theorem1_upper};
use frogbound::sim::{survival_frequency, SimConfig, Variant};

fn main() -> frogbound::Result<()> {
    let d = 2;
    println!("d = {d}, proven window [{:.4}, {:.4}]", theorem1_lower(d), theorem1_upper(d));
    println!("{:>5} {:>9} {:>7} {:>17}", "p", "variant", "freq", "95% CI");
    for p in [0.60, 0.65, 0.70, 0.72, 0.75, 0.80] {
        for variant in [Variant::Full, Variant::Oriented] {
            let mut cfg = SimConfig::new(d, p, variant);
            cfg.replicas = 400;
            cfg.max_activations = 5_000;
            cfg.seed = 7;
            let est = survival_frequency(&cfg)?;
            let (lo, hi) = est.wilson_ci;
            println!("{p:>5.2} {:>9} {:>7.3} [{lo:.3}, {hi:.3}]", variant.to_string(), est.freq);
        }
    }
    Ok(())
}
