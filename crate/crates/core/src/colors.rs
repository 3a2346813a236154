//! Succinct color matrix `(N, F, M')`.
//!
//! Rows are the color lists of the colorable nodes in BOSS order. Each row
//! is delta coded (first value absolute) and all rows are concatenated into
//! `M'`; `F` marks where each row starts. `M'` is stored as the Elias-Fano
//! code of its prefix sums, so any delta is one subtraction away and a
//! row of `c` colors decodes in `O(c)`.

use std::io::{self, Read, Write};

use crate::boss::NodeId;
use crate::coloring::{ColorableMap, DynamicColorTable};
use crate::error::{Error, Result};
use crate::succinct::{codec, BitBuf, BitVector, EliasFano, Persist};

const TAG: u8 = 0xC0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedColors {
    colorable: BitVector,
    first: BitVector,
    sums: EliasFano,
    num_colors: u32,
}

impl CompressedColors {
    /// Packs `table`, whose rows follow the ranks of `map`.
    pub fn compress(table: &DynamicColorTable, map: &ColorableMap) -> Result<Self> {
        if table.len() != map.count() {
            return Err(Error::CorruptIndex(format!("{} color rows for {} colorable nodes", table.len(), map.count())));
        }
        let mut first = BitBuf::new();
        let mut sums = Vec::new();
        let mut total = 0u64;
        for (i, row) in table.rows().iter().enumerate() {
            if row.is_empty() {
                return Err(Error::IncompleteColoring(i + 1));
            }
            let mut prev = 0u32;
            for (j, &c) in row.iter().enumerate() {
                if c <= prev {
                    return Err(Error::CorruptIndex(format!("row {} is not strictly increasing", i + 1)));
                }
                first.push(j == 0);
                total += u64::from(c - prev);
                sums.push(total);
                prev = c;
            }
        }
        Ok(CompressedColors {
            colorable: map.bits().clone(),
            first: BitVector::new(first),
            sums: EliasFano::new(&sums)?,
            num_colors: table.num_colors(),
        })
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    /// The bitmap `N`.
    pub fn colorable(&self) -> ColorableMap {
        ColorableMap::from_bits(self.colorable.clone())
    }

    pub fn colored_nodes(&self) -> usize {
        self.colorable.count_ones()
    }

    pub fn is_colored(&self, v: NodeId) -> bool {
        v.get() >= 1 && v.get() <= self.colorable.len() && self.colorable.bit(v.get() - 1)
    }

    /// Length of `M'`.
    pub fn payload_len(&self) -> usize {
        self.sums.len()
    }

    /// The bitmap `F`.
    pub fn row_starts(&self) -> &BitVector {
        &self.first
    }

    /// `M'` decoded back to deltas.
    pub fn deltas(&self) -> Vec<u64> {
        let mut prev = 0;
        self.sums
            .iter()
            .map(|s| {
                let d = s - prev;
                prev = s;
                d
            })
            .collect()
    }

    /// Half-open 0-based span of row `r` (1-based) in `M'`.
    fn row_span(&self, r: usize) -> (usize, usize) {
        let start = self.first.select_index(r - 1);
        let end = if r == self.first.count_ones() { self.sums.len() } else { self.first.select_index(r) };
        (start, end)
    }

    /// Appends the colors of `v` to `out`; returns false when `v` carries no
    /// colors.
    pub fn colors_into(&self, v: NodeId, out: &mut Vec<u32>) -> bool {
        if !self.is_colored(v) {
            return false;
        }
        let r = self.colorable.rank_prefix(v.get());
        let (start, end) = self.row_span(r);
        let base = if start == 0 { 0 } else { self.sums.get(start - 1) };
        out.extend((start..end).map(|t| (self.sums.get(t) - base) as u32));
        true
    }

    /// Colors of `v` in increasing order.
    pub fn get_colors(&self, v: NodeId) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        if self.colors_into(v, &mut out) {
            Ok(out)
        } else {
            Err(Error::NotColored(v.get()))
        }
    }

    /// Whether `v` carries `color`.
    pub fn has_color(&self, v: NodeId, color: u32) -> bool {
        if !self.is_colored(v) {
            return false;
        }
        let (start, end) = self.row_span(self.colorable.rank_prefix(v.get()));
        let base = if start == 0 { 0 } else { self.sums.get(start - 1) };
        let target = base + u64::from(color);
        // the row's prefix sums are increasing, so the color is a value lookup
        let below = self.sums.count_below(target);
        below >= start && below < end && self.sums.get(below) == target
    }
}

impl Persist for CompressedColors {
    fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        codec::put_u8(w, TAG)?;
        codec::put_u32(w, self.num_colors)?;
        self.colorable.write_to(w)?;
        self.first.write_to(w)?;
        self.sums.write_to(w)
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        codec::expect_tag(r, TAG, "color matrix")?;
        let num_colors = codec::get_u32(r)?;
        let colorable = BitVector::read_from(r)?;
        let first = BitVector::read_from(r)?;
        let sums = EliasFano::read_from(r)?;
        let consistent = first.len() == sums.len()
            && first.count_ones() == colorable.count_ones()
            && (first.is_empty() || first.bit(0));
        if !consistent {
            return Err(Error::CorruptIndex("color matrix sections disagree".into()));
        }
        Ok(CompressedColors { colorable, first, sums, num_colors })
    }
}
