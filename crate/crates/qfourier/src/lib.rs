//! File formats, seeded suites, sweeps and the command-line front end on
//! top of `qfourier-core`.

pub mod cli;
pub mod format;
pub mod gen;
pub mod report;
pub mod suite;
pub mod sweep;

pub use qfourier_core as core;
