//! Two Newton steps from 0 on the lower envelope polynomial `L` land below
//! its root, giving an explicit lower bound on `r_c`.
//!
//! ```text
//! cargo run --release --example newton_lemma
//! ```

use frogbound::poly::{find_root, lower_polynomial, newton_steps, r_lower, upper_polynomial};

fn main() -> frogbound::Result<()> {
    println!("{:>5} {:>18} {:>18} {:>18} {:>10}", "d", "newton t2", "closed form", "root of L", "L(t2)");
    for d in [2u32, 3, 5, 10, 100, 1000] {
        let l = lower_polynomial(d).to_f64();
        let iterates = newton_steps(&l, 0.0, 2)?;
        let t2 = iterates[2];
        let root = find_root(&l, 0.0, 1.0 / d as f64, 1e-16)?;
        println!("{:>5} {:>18.15} {:>18.15} {:>18.15} {:>10.2e}", d, t2, r_lower(d), root.lo, l.eval(t2));
        assert!(t2 <= root.hi);
    }

    // U sits above L on (0, 1/d), so its root comes first.
    let d = 4;
    let u = upper_polynomial(d).to_f64();
    let l = lower_polynomial(d).to_f64();
    let ru = find_root(&u, 0.0, 0.25, 1e-16)?;
    let rl = find_root(&l, 0.0, 0.25, 1e-16)?;
    println!("\nd = {d}: root of U {:.15} <= root of L {:.15}", ru.hi, rl.lo);
    Ok(())
}
