//! Uncompressed bitvector with constant-time rank and sampled select.
//!
//! Positions here are 0-based: `rank1(i)` counts ones in `[0, i)` and
//! `select1(j)` returns the position of the `(j + 1)`-th one.

use std::io::{self, Read, Write};

use super::codec::{self, Persist};
use crate::error::{Error, Result};

const WORDS_PER_BLOCK: usize = 8;
const BLOCK_BITS: usize = WORDS_PER_BLOCK * 64;
const SELECT_SAMPLE: usize = 512;
const TAG: u8 = 0xB1;

/// Growable bit buffer used while building.
#[derive(Clone, Debug, Default)]
pub struct BitBuf {
    words: Vec<u64>,
    len: usize,
}

impl BitBuf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_len(len: usize) -> Self {
        BitBuf { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl FromIterator<bool> for BitBuf {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut buf = BitBuf::new();
        for b in iter {
            buf.push(b);
        }
        buf
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainBits {
    words: Vec<u64>,
    len: usize,
    ones: usize,
    /// Ones before each block; one trailing entry holds the total.
    block_ranks: Vec<u64>,
    /// Block holding every `SELECT_SAMPLE`-th one.
    select1_hints: Vec<u32>,
    select0_hints: Vec<u32>,
}

/// Position of the `(r + 1)`-th set bit of `w`.
#[inline]
fn select_in_word(mut w: u64, r: u32) -> u32 {
    for _ in 0..r {
        w &= w - 1;
    }
    w.trailing_zeros()
}

impl PlainBits {
    pub fn new(buf: BitBuf) -> Self {
        let BitBuf { words, len } = buf;
        let nblocks = words.len().div_ceil(WORDS_PER_BLOCK);
        let mut block_ranks = Vec::with_capacity(nblocks + 1);
        let mut acc = 0u64;
        for block in 0..nblocks {
            block_ranks.push(acc);
            let end = ((block + 1) * WORDS_PER_BLOCK).min(words.len());
            acc += words[block * WORDS_PER_BLOCK..end]
                .iter()
                .map(|w| w.count_ones() as u64)
                .sum::<u64>();
        }
        block_ranks.push(acc);
        let ones = acc as usize;

        let mut select1_hints = Vec::new();
        let mut select0_hints = Vec::new();
        let (mut next1, mut next0) = (0usize, 0usize);
        for block in 0..nblocks {
            let ones_after = block_ranks[block + 1] as usize;
            let zeros_after = ((block + 1) * BLOCK_BITS).min(len) - ones_after;
            while next1 < ones_after {
                select1_hints.push(block as u32);
                next1 += SELECT_SAMPLE;
            }
            while next0 < zeros_after {
                select0_hints.push(block as u32);
                next0 += SELECT_SAMPLE;
            }
        }
        PlainBits { words, len, ones, block_ranks, select1_hints, select0_hints }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self::new(bits.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Ones in `[0, i)`, for `i <= len`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let word = i / 64;
        let block = word / WORDS_PER_BLOCK;
        let mut r = self.block_ranks[block] as usize;
        for w in &self.words[block * WORDS_PER_BLOCK..word] {
            r += w.count_ones() as usize;
        }
        let bit = i % 64;
        if bit > 0 {
            r += (self.words[word] & ((1u64 << bit) - 1)).count_ones() as usize;
        }
        r
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Position of the `(j + 1)`-th one, for `j < count_ones()`.
    pub fn select1(&self, j: usize) -> usize {
        debug_assert!(j < self.ones);
        let hint = j / SELECT_SAMPLE;
        let lo = self.select1_hints[hint] as usize;
        let hi = self
            .select1_hints
            .get(hint + 1)
            .map_or(self.block_ranks.len() - 2, |&b| b as usize);
        // last block in [lo, hi] whose rank is <= j
        let block = lo + self.block_ranks[lo..=hi].partition_point(|&r| r as usize <= j) - 1;
        let mut remaining = j - self.block_ranks[block] as usize;
        let mut word = block * WORDS_PER_BLOCK;
        loop {
            let c = self.words[word].count_ones() as usize;
            if remaining < c {
                return word * 64 + select_in_word(self.words[word], remaining as u32) as usize;
            }
            remaining -= c;
            word += 1;
        }
    }

    /// Position of the `(j + 1)`-th zero, for `j < len - count_ones()`.
    pub fn select0(&self, j: usize) -> usize {
        debug_assert!(j < self.len - self.ones);
        let zeros_before = |b: usize| b * BLOCK_BITS - self.block_ranks[b] as usize;
        let hint = j / SELECT_SAMPLE;
        let lo = self.select0_hints[hint] as usize;
        let hi = self
            .select0_hints
            .get(hint + 1)
            .map_or(self.block_ranks.len() - 2, |&b| b as usize);
        let mut a = lo;
        let mut b = hi + 1;
        while b - a > 1 {
            let m = (a + b) / 2;
            if zeros_before(m) <= j {
                a = m;
            } else {
                b = m;
            }
        }
        let mut remaining = j - zeros_before(a);
        let mut word = a * WORDS_PER_BLOCK;
        loop {
            let inv = !self.words[word];
            let c = inv.count_ones() as usize;
            if remaining < c {
                return word * 64 + select_in_word(inv, remaining as u32) as usize;
            }
            remaining -= c;
            word += 1;
        }
    }
}

impl Persist for PlainBits {
    fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        codec::put_u8(w, TAG)?;
        codec::put_usize(w, self.len)?;
        codec::put_words(w, &self.words)?;
        codec::put_words(w, &self.block_ranks)?;
        codec::put_u32s(w, &self.select1_hints)?;
        codec::put_u32s(w, &self.select0_hints)
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        codec::expect_tag(r, TAG, "plain bitvector")?;
        let len = codec::get_usize(r)?;
        let words = codec::get_words(r)?;
        if words.len() != len.div_ceil(64) {
            return Err(Error::CorruptIndex("plain bitvector length mismatch".into()));
        }
        let block_ranks = codec::get_words(r)?;
        let select1_hints = codec::get_u32s(r)?;
        let select0_hints = codec::get_u32s(r)?;
        // The directories are stored, but they must agree with the payload.
        let rebuilt = PlainBits::new(BitBuf { words, len });
        if rebuilt.block_ranks != block_ranks
            || rebuilt.select1_hints != select1_hints
            || rebuilt.select0_hints != select0_hints
        {
            return Err(Error::CorruptIndex("plain bitvector directory mismatch".into()));
        }
        Ok(rebuilt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn select_in_word_basic() {
        assert_eq!(select_in_word(0b1011, 0), 0);
        assert_eq!(select_in_word(0b1011, 1), 1);
        assert_eq!(select_in_word(0b1011, 2), 3);
    }

    #[test]
    fn empty_vector() {
        let bv = PlainBits::from_bools(std::iter::empty());
        assert_eq!(bv.rank1(0), 0);
        assert_eq!(bv.count_ones(), 0);
    }

    #[test]
    fn long_runs_cross_blocks() {
        let n = 5000;
        let bv = PlainBits::from_bools((0..n).map(|i| i % 3 == 0));
        let ones: Vec<usize> = (0..n).filter(|i| i % 3 == 0).collect();
        for (j, &p) in ones.iter().enumerate() {
            assert_eq!(bv.select1(j), p);
            assert_eq!(bv.rank1(p), j);
        }
        let zeros: Vec<usize> = (0..n).filter(|i| i % 3 != 0).collect();
        for (j, &p) in zeros.iter().enumerate() {
            assert_eq!(bv.select0(j), p);
        }
        assert_eq!(bv.rank1(n), ones.len());
    }
}
