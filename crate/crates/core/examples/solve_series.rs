//! Encloses the oriented critical return probability as the root of
//! `S(r) = sum_k (dr)^k prod_{i<k} (1 - r^i) = 1`.
//!
//! ```text
//! cargo run --release --example solve_series -- 5
//! ```

use frogbound::model::p_of_r;
use frogbound::poly::{f_inf, f_sup, r_lower, r_upper};
use frogbound::renewal::{series_bracket, solve_rc};
use frogbound::ReturnProb;

fn main() -> frogbound::Result<()> {
    let d: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);

    println!("S(r) against its closed-form envelopes, d = {d}");
    for frac in [0.2, 0.4, 0.6, 0.8, 0.95] {
        let r = frac / d as f64;
        let s = series_bracket(ReturnProb::new(r, d)?, 1e-9)?;
        println!(
            "  r = {r:.5}: {:.10} <= [{:.10}, {:.10}] <= {:.10}  ({} terms)",
            f_inf(r, d)?,
            s.lower,
            s.upper,
            f_sup(r, d)?,
            s.terms_used
        );
    }

    let rc = solve_rc(d, 1e-12)?;
    let p_lo = p_of_r(ReturnProb::new(rc.lo, d)?);
    let p_hi = p_of_r(ReturnProb::new(rc.hi, d)?);
    println!("\nr_c in [{:.15}, {:.15}]", rc.lo, rc.hi);
    println!("explicit bracket [{:.15}, {:.15}]", r_lower(d), r_upper(d));
    println!("oriented p_c in [{p_lo:.12}, {p_hi:.12}]");
    Ok(())
}
