//! File formats, a parallel trial runner and the command-line experiments
//! built on `gridcode-core`.

pub mod cli;
pub mod formats;
pub mod runner;
pub mod stats;
