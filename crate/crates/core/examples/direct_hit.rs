//! A single frog started at the root visits a fixed vertex at distance `n`
//! with probability `r^n`. Checked by simulation.
//!
//! ```text
//! cargo run --release --example direct_hit
//! ```

use frogbound::sim::direct_hit_probability_check;

fn main() -> frogbound::Result<()> {
    let (d, p) = (3, 0.8);
    for n in 1..=5 {
        let hit = direct_hit_probability_check(d, p, n, 500_000, n as u64)?;
        let z = (hit.frequency - hit.expected) / hit.sigma();
        println!("n = {n}: observed {:.5}, r^n = {:.5}, z = {z:+.2}", hit.frequency, hit.expected);
    }
    Ok(())
}
