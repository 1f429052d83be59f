//! File formats, reports and the `multicomp` command line for h-MC codes.
//!
//! The algorithms live in `multicomp-core`; this crate adds JSON documents
//! (codebooks, mixtures, reports), the seeded readout shuffle and timing.

pub mod cli;
pub mod error;
pub mod format;
pub mod report;

pub use error::{CliError, CliResult};
