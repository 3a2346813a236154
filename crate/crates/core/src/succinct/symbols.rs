//! Rank/select sequence over a small alphabet (at most 16 codes).
//!
//! Symbols are packed four bits each. Every block of 256 symbols stores the
//! cumulative count of each code seen before it, and in-block counting is
//! done sixteen symbols per word.

use std::io::{self, Read, Write};

use super::codec::{self, Persist};
use crate::error::{bounds, Error, Result};

const PER_WORD: usize = 16;
const BLOCK: usize = 256;
const WORDS_PER_BLOCK: usize = BLOCK / PER_WORD;
const NIBBLE_LSB: u64 = 0x1111_1111_1111_1111;
const TAG: u8 = 0x5E;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSequence {
    sigma: u8,
    len: usize,
    words: Vec<u64>,
    /// `counts[b * sigma + c]`: occurrences of `c` before block `b`.
    counts: Vec<u32>,
}

/// Counts nibbles of `w` equal to `c` among the lowest `n` nibbles.
#[inline]
fn count_in_word(w: u64, c: u8, n: usize) -> usize {
    let x = w ^ (c as u64 * NIBBLE_LSB);
    // one bit per nibble, set when the nibble is nonzero
    let nonzero = (x | x >> 1 | x >> 2 | x >> 3) & NIBBLE_LSB;
    let mask = if n >= PER_WORD { NIBBLE_LSB } else { NIBBLE_LSB & ((1u64 << (4 * n)) - 1) };
    n.min(PER_WORD) - (nonzero & mask).count_ones() as usize
}

impl SymbolSequence {
    /// Builds from codes in `0..sigma`.
    pub fn new(sigma: u8, codes: &[u8]) -> Result<Self> {
        if sigma == 0 || sigma > 16 {
            return Err(Error::InvalidAlphabet(format!("alphabet size {sigma} not in 1..=16")));
        }
        if let Some(&bad) = codes.iter().find(|&&c| c >= sigma) {
            return Err(Error::InvalidAlphabet(format!("code {bad} outside alphabet of size {sigma}")));
        }
        let len = codes.len();
        let mut words = vec![0u64; len.div_ceil(PER_WORD)];
        for (i, &c) in codes.iter().enumerate() {
            words[i / PER_WORD] |= (c as u64) << (4 * (i % PER_WORD));
        }
        let s = sigma as usize;
        let nblocks = len.div_ceil(BLOCK) + 1;
        let mut counts = vec![0u32; nblocks * s];
        let mut running = vec![0u32; s];
        for (i, &c) in codes.iter().enumerate() {
            if i % BLOCK == 0 {
                counts[(i / BLOCK) * s..(i / BLOCK + 1) * s].copy_from_slice(&running);
            }
            running[c as usize] += 1;
        }
        counts[(nblocks - 1) * s..].copy_from_slice(&running);
        Ok(SymbolSequence { sigma, len, words, counts })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sigma(&self) -> u8 {
        self.sigma
    }

    /// Code at 0-based index. Unchecked.
    #[inline]
    pub(crate) fn code_at(&self, i: usize) -> u8 {
        (self.words[i / PER_WORD] >> (4 * (i % PER_WORD)) & 0xF) as u8
    }

    /// Occurrences of `c` among the first `i` symbols. Unchecked.
    #[inline]
    pub(crate) fn rank_prefix(&self, c: u8, i: usize) -> usize {
        let block = i / BLOCK;
        let mut r = self.counts[block * self.sigma as usize + c as usize] as usize;
        let mut word = block * WORDS_PER_BLOCK;
        let mut left = i - block * BLOCK;
        while left > 0 {
            let n = left.min(PER_WORD);
            r += count_in_word(self.words[word], c, n);
            left -= n;
            word += 1;
        }
        r
    }

    /// Total occurrences of `c`.
    pub fn count(&self, c: u8) -> usize {
        if c >= self.sigma {
            return 0;
        }
        self.rank_prefix(c, self.len)
    }

    /// 0-based index of the `(j + 1)`-th occurrence of `c`, if any.
    pub(crate) fn select_index(&self, c: u8, j: usize) -> Option<usize> {
        let s = self.sigma as usize;
        let nblocks = self.counts.len() / s;
        let at = |b: usize| self.counts[b * s + c as usize] as usize;
        if self.count(c) <= j {
            return None;
        }
        // last block whose preceding count is <= j
        let (mut lo, mut hi) = (0usize, nblocks);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if at(mid) <= j {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut remaining = j - at(lo);
        let mut word = lo * WORDS_PER_BLOCK;
        while word < self.words.len() {
            let n = (self.len - word * PER_WORD).min(PER_WORD);
            let here = count_in_word(self.words[word], c, n);
            if remaining < here {
                let base = word * PER_WORD;
                return (base..base + n).filter(|&i| self.code_at(i) == c).nth(remaining);
            }
            remaining -= here;
            word += 1;
        }
        None
    }

    /// Symbol at 1-based position `i`.
    pub fn access(&self, i: usize) -> Result<u8> {
        if i == 0 || i > self.len {
            return Err(bounds(i, self.len));
        }
        Ok(self.code_at(i - 1))
    }

    /// Occurrences of `c` in the prefix of length `i`.
    pub fn rank(&self, c: u8, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(bounds(i, self.len));
        }
        if c >= self.sigma {
            return Err(bounds(c as usize, self.sigma as usize));
        }
        Ok(self.rank_prefix(c, i))
    }

    /// 1-based position of the `j`-th occurrence of `c`.
    pub fn select(&self, c: u8, j: usize) -> Result<usize> {
        if c >= self.sigma {
            return Err(bounds(c as usize, self.sigma as usize));
        }
        j.checked_sub(1)
            .and_then(|j0| self.select_index(c, j0))
            .map(|p| p + 1)
            .ok_or_else(|| bounds(j, self.count(c)))
    }
}

impl Persist for SymbolSequence {
    fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        codec::put_u8(w, TAG)?;
        codec::put_u8(w, self.sigma)?;
        codec::put_usize(w, self.len)?;
        codec::put_words(w, &self.words)?;
        codec::put_u32s(w, &self.counts)
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        codec::expect_tag(r, TAG, "symbol sequence")?;
        let sigma = codec::get_u8(r)?;
        let len = codec::get_usize(r)?;
        let words = codec::get_words(r)?;
        let counts = codec::get_u32s(r)?;
        if sigma == 0 || sigma > 16 || words.len() != len.div_ceil(PER_WORD) {
            return Err(Error::CorruptIndex("symbol sequence header mismatch".into()));
        }
        let codes: Vec<u8> = (0..len)
            .map(|i| (words[i / PER_WORD] >> (4 * (i % PER_WORD)) & 0xF) as u8)
            .collect();
        let rebuilt = SymbolSequence::new(sigma, &codes)?;
        if rebuilt.counts != counts {
            return Err(Error::CorruptIndex("symbol sequence directory mismatch".into()));
        }
        Ok(rebuilt)
    }
}
