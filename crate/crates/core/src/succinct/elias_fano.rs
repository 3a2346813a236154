//! Elias-Fano encoding of nondecreasing integer sequences.

use std::io::{self, Read, Write};

use super::bits::{BitBuf, PlainBits};
use super::codec::{self, Persist};
use crate::error::{bounds, Error, Result};

const TAG: u8 = 0xEF;

/// A nondecreasing sequence of `u64` stored in `n * (2 + lg(u/n))` bits plus
/// the rank/select directory of its upper half.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliasFano {
    len: usize,
    universe: u64,
    low_width: u32,
    lows: Vec<u64>,
    highs: PlainBits,
}

fn low_width_for(len: usize, universe: u64) -> u32 {
    if len == 0 || universe <= len as u64 {
        0
    } else {
        63 - (universe / len as u64).leading_zeros()
    }
}

impl EliasFano {
    /// Encodes `values`, which must be nondecreasing.
    pub fn new(values: &[u64]) -> Result<Self> {
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::CorruptIndex("Elias-Fano input is not monotone".into()));
        }
        let len = values.len();
        let universe = values.last().map_or(0, |&v| v + 1);
        Ok(Self::from_sorted(values.iter().copied(), len, universe))
    }

    /// Encodes `len` nondecreasing values all below `universe`.
    pub(crate) fn from_sorted<I: IntoIterator<Item = u64>>(values: I, len: usize, universe: u64) -> Self {
        let low_width = low_width_for(len, universe);
        let mut lows = vec![0u64; (len * low_width as usize).div_ceil(64)];
        let high_len = len + (universe >> low_width) as usize + 1;
        let mut highs = BitBuf::with_len(high_len);
        let mask = if low_width == 0 { 0 } else { (1u64 << low_width) - 1 };
        let mut count = 0;
        for (i, v) in values.into_iter().enumerate() {
            debug_assert!(v < universe.max(1));
            if low_width > 0 {
                write_bits(&mut lows, i * low_width as usize, low_width, v & mask);
            }
            highs.set((v >> low_width) as usize + i);
            count += 1;
        }
        assert_eq!(count, len, "length hint disagrees with the iterator");
        EliasFano { len, universe, low_width, lows, highs: PlainBits::new(highs) }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    #[inline]
    fn low(&self, i: usize) -> u64 {
        if self.low_width == 0 {
            0
        } else {
            read_bits(&self.lows, i * self.low_width as usize, self.low_width)
        }
    }

    /// The `j`-th value (0-based), in constant time.
    pub fn access(&self, j: usize) -> Result<u64> {
        if j >= self.len {
            return Err(bounds(j, self.len));
        }
        Ok(self.get(j))
    }

    #[inline]
    pub(crate) fn get(&self, j: usize) -> u64 {
        let high = (self.highs.select1(j) - j) as u64;
        (high << self.low_width) | self.low(j)
    }

    /// Number of values strictly below `x`.
    pub fn count_below(&self, x: u64) -> usize {
        if x >= self.universe {
            return self.len;
        }
        let hx = x >> self.low_width;
        let (mut pos, mut idx) = if hx == 0 {
            (0, 0)
        } else {
            let z = self.highs.select0(hx as usize - 1);
            (z + 1, z + 1 - hx as usize)
        };
        let lx = x & ((1u64 << self.low_width) - 1);
        while pos < self.highs.len() && self.highs.get(pos) && self.low(idx) < lx {
            pos += 1;
            idx += 1;
        }
        idx
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |j| self.get(j))
    }
}

fn write_bits(words: &mut [u64], pos: usize, width: u32, value: u64) {
    let (w, off) = (pos / 64, (pos % 64) as u32);
    words[w] |= value << off;
    if off + width > 64 {
        words[w + 1] |= value >> (64 - off);
    }
}

#[inline]
fn read_bits(words: &[u64], pos: usize, width: u32) -> u64 {
    let (w, off) = (pos / 64, (pos % 64) as u32);
    let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
    let mut v = words[w] >> off;
    if off + width > 64 {
        v |= words[w + 1] << (64 - off);
    }
    v & mask
}

impl Persist for EliasFano {
    fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        codec::put_u8(w, TAG)?;
        codec::put_usize(w, self.len)?;
        codec::put_u64(w, self.universe)?;
        codec::put_u8(w, self.low_width as u8)?;
        codec::put_words(w, &self.lows)?;
        self.highs.write_to(w)
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        codec::expect_tag(r, TAG, "Elias-Fano sequence")?;
        let len = codec::get_usize(r)?;
        let universe = codec::get_u64(r)?;
        let low_width = codec::get_u8(r)? as u32;
        let lows = codec::get_words(r)?;
        let highs = PlainBits::read_from(r)?;
        if low_width != low_width_for(len, universe)
            || lows.len() != (len * low_width as usize).div_ceil(64)
            || highs.count_ones() != len
            || highs.len() != len + (universe >> low_width) as usize + 1
        {
            return Err(Error::CorruptIndex("Elias-Fano header mismatch".into()));
        }
        Ok(EliasFano { len, universe, low_width, lows, highs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn access_examples() {
        let ef = EliasFano::new(&[0]).unwrap();
        assert_eq!(ef.access(0).unwrap(), 0);

        let ef = EliasFano::new(&[1, 2, 4, 4, 9]).unwrap();
        assert_eq!(ef.access(2).unwrap(), 4);
        assert!(matches!(ef.access(5), Err(Error::Bounds { .. })));
    }

    #[test]
    fn rejects_decreasing_input() {
        assert!(EliasFano::new(&[3, 2]).is_err());
    }

    #[test]
    fn count_below_with_duplicates() {
        let ef = EliasFano::new(&[1, 3, 3, 7]).unwrap();
        let got: Vec<usize> = (0..10).map(|x| ef.count_below(x)).collect();
        assert_eq!(got, vec![0, 0, 1, 1, 3, 3, 3, 3, 4, 4]);
    }

    #[test]
    fn empty_sequence() {
        let ef = EliasFano::new(&[]).unwrap();
        assert_eq!(ef.len(), 0);
        assert_eq!(ef.count_below(5), 0);
    }

    #[test]
    fn large_round_trip() {
        let mut v = 0u64;
        let values: Vec<u64> = (0..1_000_000u64)
            .map(|i| {
                v += (i * 2654435761) % 7;
                v
            })
            .collect();
        let ef = EliasFano::new(&values).unwrap();
        assert!(ef.iter().eq(values.iter().copied()));
    }

    proptest! {
        #[test]
        fn round_trip(mut values in proptest::collection::vec(0u64..1 << 40, 0..2000)) {
            values.sort_unstable();
            let ef = EliasFano::new(&values).unwrap();
            prop_assert_eq!(ef.iter().collect::<Vec<_>>(), values.clone());
            let mut bytes = Vec::new();
            ef.write_to(&mut bytes).unwrap();
            let back = EliasFano::read_from(&mut bytes.as_slice()).unwrap();
            prop_assert_eq!(back, ef);
        }
    }
}
