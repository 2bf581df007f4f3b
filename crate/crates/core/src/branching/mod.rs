//! Two-type branching process dominating the frog model, and the coupling
//! that realises the domination step by step.

pub mod coupling;
pub mod law;
pub mod moment;

pub use coupling::{classify_frog, run_coupled, write_trace_csv, Classification, CoupledRun, CoupledState, TraceRow, VisitedSet};
pub use law::{build_partition, fmbp_law, sample_offspring, ttbp_law, Cell, IntervalPartition, OffspringLaw, Outcome};
pub use moment::{moment_matrix, spectral_radius, ttbp_spectral_radius, MomentMatrix};
