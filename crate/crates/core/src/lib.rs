//! Bounds on the critical lifetime parameter of the frog model on the
//! homogeneous tree `T_d`, where every vertex has `d + 1` neighbours.
//!
//! The crate is organised by capability:
//!
//! * [`model`] maps between the lifetime parameter `p` and the return
//!   probability `r`, and evaluates the closed-form bounds, including the
//!   older bounds from the literature, for comparison.
//! * [`branching`] holds the two-type branching process that dominates the
//!   frog model, its moment matrix, and a pathwise coupling checker.
//! * [`renewal`] computes the renewal sequence of the oriented model and
//!   encloses its critical return probability as the root of a power series.
//! * [`poly`] holds the polynomial sandwich for that series, the Newton
//!   construction of the explicit lower root bound, and the exact-integer
//!   positivity certificate behind the explicit upper root bound.
//! * [`sim`] is a seeded Monte Carlo simulator of the full and oriented
//!   frog models.
//! * [`cli`] builds the output records of the `frogbound` command-line tool
//!   and formats them as CSV or JSON lines.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory; run
//! `cargo run --release --example table1` for the headline numbers.

pub mod branching;
pub mod cli;
pub mod error;
pub mod model;
pub mod poly;
pub mod renewal;
pub mod sim;

pub use error::{Error, Result};
pub use model::{BoundsReport, ModelParams, ReturnProb};
