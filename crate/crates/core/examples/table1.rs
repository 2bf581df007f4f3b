//! Headline numbers: lower and upper bounds on `p_c` and the numerically
//! solved oriented critical point, for the degrees of the comparison table.
//!
//! ```text
//! cargo run --release --example table1
//! ```

use frogbound::cli::{cmd_table, emit, OutputOptions};

fn main() -> frogbound::Result<()> {
    let rows = cmd_table()?;
    print!("{}", emit(&rows, OutputOptions::default())?);
    Ok(())
}
