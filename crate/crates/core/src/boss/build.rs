//! Sort-based construction of the BOSS arrays.
//!
//! Every string is framed as `$^(k-1) S $` and cut into k-mers. Each k-mer is
//! an edge from its (k-1)-prefix to its (k-1)-suffix. Edges are sorted by
//! the colexicographic order of the source label, then by edge symbol.

use crate::sequence::{DnaString, Symbol};

/// Sort key of a node label `L` of length `k - 1`.
///
/// Labels are either the all-dummy root, an ending label `A$`, or
/// `$^d A` with `A` solid and nonempty. `solid` holds `A` reversed, two bits
/// per symbol, left-aligned, so that comparing `(class, solid, len)` equals
/// comparing reversed labels with `$` smallest.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub(crate) struct NodeKey {
    class: u8,
    solid: u128,
    len: u8,
}

const CLASS_DUMMY_END: u8 = 0;
const CLASS_SOLID_END: u8 = 1;
const SLOTS: u32 = 63;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub(crate) struct EdgeKey {
    pub node: NodeKey,
    pub symbol: u8,
}

#[inline]
fn slot_shift(i: u32) -> u32 {
    2 * (SLOTS - 1 - i)
}

impl NodeKey {
    /// Key of `label`, which must have one of the three admissible shapes.
    pub(crate) fn of(label: &[Symbol]) -> NodeKey {
        let last = *label.last().expect("labels are nonempty");
        if last.is_dummy() {
            let solid: &[Symbol] = &label[..label.len() - 1];
            if solid.iter().all(|s| s.is_dummy()) {
                return NodeKey { class: CLASS_DUMMY_END, solid: 0, len: 0 };
            }
            return NodeKey { class: CLASS_DUMMY_END, solid: pack_reversed(solid), len: solid.len() as u8 };
        }
        let d = label.iter().take_while(|s| s.is_dummy()).count();
        let solid = &label[d..];
        NodeKey { class: CLASS_SOLID_END, solid: pack_reversed(solid), len: solid.len() as u8 }
    }

    pub(crate) fn is_ending(&self) -> bool {
        self.class == CLASS_DUMMY_END && self.len > 0
    }

    /// Last symbol of the label.
    pub(crate) fn last_symbol(&self) -> Symbol {
        if self.class == CLASS_DUMMY_END {
            Symbol::DUMMY
        } else {
            Symbol::from_code(((self.solid >> slot_shift(0)) & 3) as u8 + 2).unwrap()
        }
    }

    /// Key identifying the label with its first symbol removed. Nodes that
    /// share it share their (k-2)-suffix.
    pub(crate) fn suffix_group(&self, k: usize) -> (u8, u128, u8) {
        let full = (k - 1) as u8;
        match self.class {
            CLASS_DUMMY_END if self.len == 0 => (2, 0, 0),
            _ if self.len == full || self.is_ending() => {
                // drop the first symbol of A, which is the last packed slot
                let cleared = self.solid & !(3u128 << slot_shift(self.len as u32 - 1));
                (self.class, cleared, self.len - 1)
            }
            _ => (self.class, self.solid, self.len),
        }
    }
}

fn pack_reversed(solid: &[Symbol]) -> u128 {
    let mut packed = 0u128;
    for (i, s) in solid.iter().rev().enumerate() {
        packed |= ((s.code() - 2) as u128) << slot_shift(i as u32);
    }
    packed
}

/// Collects the distinct edges of the padded strings, terminal edges of
/// ending nodes included, sorted.
pub(crate) fn collect_edges(strings: &[DnaString], k: usize) -> Vec<EdgeKey> {
    let mut edges: Vec<EdgeKey> = Vec::new();
    let mut compacted_len = 0usize;
    let mut padded: Vec<Symbol> = Vec::new();
    for s in strings {
        padded.clear();
        padded.extend(std::iter::repeat_n(Symbol::DUMMY, k - 1));
        padded.extend_from_slice(s.symbols());
        padded.push(Symbol::DUMMY);
        for w in padded.windows(k) {
            edges.push(EdgeKey { node: NodeKey::of(&w[..k - 1]), symbol: w[k - 1].code() });
        }
        // the ending node A$ carries a single outgoing `$`
        let tail = &padded[padded.len() - (k - 1)..];
        edges.push(EdgeKey { node: NodeKey::of(tail), symbol: Symbol::DUMMY.code() });

        if edges.len() > 2 * compacted_len + (1 << 20) {
            edges.sort_unstable();
            edges.dedup();
            compacted_len = edges.len();
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}
