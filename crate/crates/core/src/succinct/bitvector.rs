use std::io::{self, Read, Write};

use super::bits::{BitBuf, PlainBits};
use super::codec::{self, Persist};
use super::elias_fano::EliasFano;
use crate::error::{bounds, Error, Result};

/// Vectors at or below this density are stored sparsely.
pub const SPARSE_DENSITY: f64 = 0.25;

const TAG_PLAIN: u8 = 0xB0;
const TAG_SPARSE: u8 = 0xB5;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Plain(PlainBits),
    /// Positions of the set bits, Elias-Fano encoded.
    Sparse { len: usize, ones: EliasFano },
}

/// Static bitvector with rank and select, 1-based as in the index formulas:
/// `rank1(i)` counts ones in `bits[1..=i]` and `select1(j)` returns the
/// position of the `j`-th one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitVector {
    repr: Repr,
}

impl BitVector {
    /// Builds a vector, choosing the representation by density.
    pub fn new(buf: BitBuf) -> Self {
        let ones = buf.count_ones();
        if buf.is_empty() || (ones as f64) > SPARSE_DENSITY * buf.len() as f64 {
            Self::plain(buf)
        } else {
            Self::sparse(buf)
        }
    }

    pub fn plain(buf: BitBuf) -> Self {
        BitVector { repr: Repr::Plain(PlainBits::new(buf)) }
    }

    pub fn sparse(buf: BitBuf) -> Self {
        let len = buf.len();
        let positions = (0..len).filter(|&i| buf.get(i)).map(|i| i as u64);
        let ones = EliasFano::from_sorted(positions, buf.count_ones(), len as u64);
        BitVector { repr: Repr::Sparse { len, ones } }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self::new(bits.into_iter().collect())
    }

    /// Parses a string of `0`/`1`, mostly for tests and examples.
    pub fn from_str_bits(s: &str) -> Self {
        Self::from_bools(s.bytes().map(|b| b == b'1'))
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.repr, Repr::Sparse { .. })
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Plain(p) => p.len(),
            Repr::Sparse { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count_ones(&self) -> usize {
        match &self.repr {
            Repr::Plain(p) => p.count_ones(),
            Repr::Sparse { ones, .. } => ones.len(),
        }
    }

    /// Ones among the first `i` bits. Unchecked variant of [`rank1`](Self::rank1).
    #[inline]
    pub(crate) fn rank_prefix(&self, i: usize) -> usize {
        match &self.repr {
            Repr::Plain(p) => p.rank1(i),
            Repr::Sparse { ones, .. } => ones.count_below(i as u64),
        }
    }

    /// 0-based position of the `(j + 1)`-th one. Unchecked.
    #[inline]
    pub(crate) fn select_index(&self, j: usize) -> usize {
        match &self.repr {
            Repr::Plain(p) => p.select1(j),
            Repr::Sparse { ones, .. } => ones.get(j) as usize,
        }
    }

    /// Bit at 1-based position `i`.
    pub fn get(&self, i: usize) -> Result<bool> {
        if i == 0 || i > self.len() {
            return Err(bounds(i, self.len()));
        }
        Ok(self.bit(i - 1))
    }

    /// Bit at 0-based index. Unchecked.
    #[inline]
    pub(crate) fn bit(&self, i: usize) -> bool {
        match &self.repr {
            Repr::Plain(p) => p.get(i),
            Repr::Sparse { ones, .. } => ones.count_below(i as u64 + 1) > ones.count_below(i as u64),
        }
    }

    /// Number of ones in `bits[1..=i]`, for `0 <= i <= len`.
    pub fn rank1(&self, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(bounds(i, self.len()));
        }
        Ok(self.rank_prefix(i))
    }

    pub fn rank0(&self, i: usize) -> Result<usize> {
        self.rank1(i).map(|r| i - r)
    }

    /// 1-based position of the `j`-th one, for `1 <= j <= count_ones()`.
    pub fn select1(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.count_ones() {
            return Err(bounds(j, self.count_ones()));
        }
        Ok(self.select_index(j - 1) + 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.bit(i))
    }
}

impl Persist for BitVector {
    fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        match &self.repr {
            Repr::Plain(p) => {
                codec::put_u8(w, TAG_PLAIN)?;
                p.write_to(w)
            }
            Repr::Sparse { len, ones } => {
                codec::put_u8(w, TAG_SPARSE)?;
                codec::put_usize(w, *len)?;
                ones.write_to(w)
            }
        }
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let repr = match codec::get_u8(r)? {
            TAG_PLAIN => Repr::Plain(PlainBits::read_from(r)?),
            TAG_SPARSE => {
                let len = codec::get_usize(r)?;
                let ones = EliasFano::read_from(r)?;
                if ones.universe() > len as u64 {
                    return Err(Error::CorruptIndex("sparse bitvector exceeds its length".into()));
                }
                Repr::Sparse { len, ones }
            }
            t => return Err(Error::CorruptIndex(format!("unknown bitvector tag {t:#04x}"))),
        };
        Ok(BitVector { repr })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_rank(bits: &[bool], i: usize) -> usize {
        bits[..i].iter().filter(|&&b| b).count()
    }

    fn naive_select(bits: &[bool], j: usize) -> Option<usize> {
        bits.iter().enumerate().filter(|(_, &b)| b).nth(j.checked_sub(1)?).map(|(p, _)| p + 1)
    }

    fn check_against_oracle(bits: &[bool], bv: &BitVector) {
        assert_eq!(bv.len(), bits.len());
        for i in 0..=bits.len() {
            assert_eq!(bv.rank1(i).unwrap(), naive_rank(bits, i), "rank1({i})");
        }
        let ones = naive_rank(bits, bits.len());
        for j in 1..=ones {
            assert_eq!(bv.select1(j).unwrap(), naive_select(bits, j).unwrap(), "select1({j})");
        }
        assert!(bv.select1(ones + 1).is_err());
        for (i, &b) in bits.iter().enumerate() {
            assert_eq!(bv.get(i + 1).unwrap(), b);
        }
    }

    #[test]
    fn rank_select_examples() {
        for bv in [BitVector::plain("10110".chars().map(|c| c == '1').collect()), BitVector::sparse("10110".chars().map(|c| c == '1').collect())] {
            assert_eq!(bv.rank1(0).unwrap(), 0);
            assert_eq!(bv.rank1(5).unwrap(), 3);
            assert_eq!(bv.rank1(3).unwrap(), 2);
            assert_eq!(bv.select1(1).unwrap(), 1);
            assert_eq!(bv.select1(3).unwrap(), 4);
            assert!(bv.rank1(6).is_err());
        }
        let bv = BitVector::from_str_bits("00001");
        assert!(matches!(bv.select1(2), Err(Error::Bounds { .. })));
        assert_eq!(bv.select1(1).unwrap(), 5);
    }

    #[test]
    fn density_threshold_picks_representation() {
        assert!(!BitVector::from_str_bits("10110").is_sparse());
        assert!(BitVector::from_str_bits("10000000").is_sparse());
    }

    #[test]
    fn differential_against_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..1000 {
            let len = rng.gen_range(1..=4096);
            let density = rng.gen_range(0.01..=0.99);
            let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
            let buf: BitBuf = bits.iter().copied().collect();
            check_against_oracle(&bits, &BitVector::plain(buf.clone()));
            check_against_oracle(&bits, &BitVector::sparse(buf));
        }
    }

    #[test]
    fn sparse_is_smaller_when_sparse() {
        let n = 1 << 16;
        let buf: BitBuf = (0..n).map(|i| i % 997 == 0).collect();
        let plain = BitVector::plain(buf.clone());
        let sparse = BitVector::sparse(buf);
        assert!(sparse.serialized_len() < plain.serialized_len());
        // plain n-bit form, without any directory
        assert!(sparse.serialized_len() < n / 8);
    }

    proptest! {
        #[test]
        fn serialization_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..3000)) {
            let bv = BitVector::from_bools(bits.iter().copied());
            let mut bytes = Vec::new();
            bv.write_to(&mut bytes).unwrap();
            let back = BitVector::read_from(&mut bytes.as_slice()).unwrap();
            prop_assert_eq!(&back, &bv);
            prop_assert_eq!(bytes.len(), bv.serialized_len());
        }
    }
}
