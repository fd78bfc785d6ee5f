pub mod appendix_checks;
pub mod cli;
mod bitset;
pub mod coloring;
pub mod error;
pub mod graph_core;
pub mod oracle;
pub mod structures;

pub use error::{Budget, Error, Result};
