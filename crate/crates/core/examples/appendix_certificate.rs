//! Exact integer check that the explicit upper root bound `r_upper(d)` makes
//! `U` negative for every integer `d >= 2`: a degree-14 polynomial in `d`
//! is positive at `d = 2..=6`, and its Cauchy root bound is below 6.
//!
//! ```text
//! cargo run --release --example appendix_certificate
//! ```

use frogbound::poly::{certificate_polynomial, certify_upper_root_bound, r_upper, u_monotone_window, upper_polynomial};

fn main() -> frogbound::Result<()> {
    let poly = certificate_polynomial();
    println!("coefficients (constant first): {:?}", poly.coeffs());

    let cert = certify_upper_root_bound();
    for (d, v) in &cert.values {
        println!("  Q({d}) = {v}");
    }
    let (num, den) = cert.cauchy_ratio;
    println!("Cauchy bound 1 + {num}/{den} = {:.6}", 1.0 + num as f64 / den as f64);
    println!("certificate holds: {}", cert.holds);

    // floating-point spot check of what the certificate proves
    for d in [2u32, 3, 7, 50, 10_000] {
        let u = upper_polynomial(d).to_f64();
        let window = u_monotone_window(d)?;
        println!("  d = {d:>5}: U(r_upper) = {:+.3e}, decreasing window ends at {window:.6}", u.eval(r_upper(d)));
    }
    Ok(())
}
