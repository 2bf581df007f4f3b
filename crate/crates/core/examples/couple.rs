//! Runs the frog model and its dominating two-type branching process off
//! one stream of uniforms and checks the dominance step by step.
//!
//! ```text
//! cargo run --release --example couple
//! ```

use frogbound::branching::{moment_matrix, run_coupled, spectral_radius};
use frogbound::ModelParams;

fn main() -> frogbound::Result<()> {
    for (d, p) in [(2, 0.55), (2, 0.7), (3, 0.6), (5, 0.9)] {
        let params = ModelParams::new(d, p)?;
        let rho = spectral_radius(&moment_matrix(params));
        let run = run_coupled(params, 20_000, 1)?;
        let end = run.final_state();
        println!(
            "d={d} p={p:.2} rho={rho:.3}: {} steps, frogs ({}, {}), dominating ({}, {}), violations {}",
            end.t, end.n_fm1, end.n_fm2, end.n_tt1, end.n_tt2, run.violations
        );
        let top: Vec<String> = run
            .ab_counts
            .iter()
            .take(4)
            .map(|((a, b), n)| format!("({a},{b})x{n}"))
            .collect();
        println!("    site counts seen: {}", top.join(" "));
    }
    Ok(())
}
