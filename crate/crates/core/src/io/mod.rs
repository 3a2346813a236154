//! Input parsing, the index container and synthetic data.

pub mod container;
pub mod reads;
pub mod synthetic;

pub use reads::{parse_reads, parse_reads_as, read_reads_path, Format};
