//! File formats, parallel Monte Carlo and parameter sweeps on top of
//! `infoblotto-core`. The `infoblotto` binary is the command-line front end.

pub mod format;
pub mod parallel;
pub mod sweep;

pub use sweep::{format_number, Axis, GameKind, SweepSpec};
