//! Closed-form bounds next to the older bounds from the literature.
//!
//! ```text
//! cargo run --release --example bounds -- 2..10
//! ```

use frogbound::cli::parse_degree_list;
use frogbound::model::{literature_bounds, monotonicity_gap, upper_via_return_prob};

fn main() -> frogbound::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "2..10".into());
    println!("{:>4} {:>10} {:>10} {:>10} {:>10} {:>10}  clamped", "d", "lower", "upper", "gap", "2019", "2018");
    for d in parse_degree_list(&spec)? {
        let b = literature_bounds(d)?;
        // the upper bound also comes out of the p <-> r bijection
        let via_r = upper_via_return_prob(d)?;
        debug_assert!((via_r - b.ub_pc).abs() < 1e-12);
        println!(
            "{:>4} {:>10.7} {:>10.7} {:>10.2e} {:>10.7} {:>10.7}  {}",
            d,
            b.lb_pc,
            b.ub_pc,
            b.ub_pc - b.lb_pc,
            b.l2019_ub,
            b.gms2018_ub,
            b.vacuous.names()
        );
    }

    // The bounds are tight enough to separate p_c(d) from p_c(1.75 d).
    let separated = (2..=1000).filter(|&d| monotonicity_gap(d, 1.75)).count();
    println!("\nlower(d) > upper(1.75 d) holds for {separated} of 999 degrees in 2..=1000");
    Ok(())
}
