//! Static succinct structures: rank/select bitvectors, Elias-Fano sequences,
//! and a rank/select sequence over a small alphabet.

pub mod bits;
mod bitvector;
pub mod codec;
mod elias_fano;
mod symbols;

pub use bits::BitBuf;
pub use bitvector::{BitVector, SPARSE_DENSITY};
pub use codec::Persist;
pub use elias_fano::EliasFano;
pub use symbols::SymbolSequence;

/// The monotone sequence type used for color payloads.
pub type MonotoneSequence = EliasFano;
