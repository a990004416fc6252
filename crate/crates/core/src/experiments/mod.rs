//! Experiment harness: parameter sweeps, delay-Doppler orthogonality and
//! the self-test suite.

pub mod ortho;
pub mod selftest;
pub mod sweep;

pub use ortho::{full_ranges, orthogonality_check, OrthogonalityReport};
pub use selftest::{run_selftest, CheckOutcome, SelftestConfig, SelftestSummary};
pub use sweep::{sweep_beta, sweep_qt, QtSelection, SkippedPoint, SweepConfig, SweepRecord, SweepRow, SweepTable};
