//! Colored de Bruijn graph index of DNA reads.
//!
//! The graph of a read set and its reverse complements is stored in BOSS
//! form ([`boss`]). Only the nodes needed to tell reads apart are colored
//! ([`coloring`]), and the colors are kept in a compressed matrix
//! ([`colors`]). Reads and contigs are recovered from the index alone
//! ([`traversal`]).

pub mod boss;
pub mod coloring;
pub mod colors;
pub mod error;
pub mod index;
pub mod io;
pub mod sequence;
pub mod succinct;
pub mod traversal;

pub use boss::{BossIndex, NodeId};
pub use colors::CompressedColors;
pub use error::{Error, Result};
pub use index::{ColoredIndex, StatsRecord};
pub use sequence::{DnaString, ReadSet, Symbol};
