//! Sweeps, serialization and plotting for the plasma skin-effect solver.
//!
//! The numerical core lives in `plasmaskin-core`; this crate adds everything
//! that needs an operating system: parallel resonance-region sweeps, CSV and
//! JSON serialization of sweep records, standalone SVG charts, the validation
//! suite, and the `plasmaskin` command-line binary.

pub mod cli;
pub mod io;
pub mod record;
pub mod svg;
pub mod sweep;
pub mod validate;

pub use record::{ImpedanceRecord, PeakReport, SweepSpec};
pub use sweep::{find_peak, run_sweep, run_sweep_with_workers};
