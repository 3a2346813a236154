//! BOSS representation of the de Bruijn graph of a read set and its
//! reverse complements.
//!
//! Nodes are the distinct (k-1)-labels, ordered colexicographically (read
//! right to left, `$` smallest). The index holds three arrays:
//!
//! * `E`, the outgoing edge symbols of every node in node order, each
//!   carrying a flag that is set when an earlier node with the same
//!   (k-2)-suffix already has an edge with that symbol (both edges reach the
//!   same target, so only the unflagged one is counted when mapping edges to
//!   targets);
//! * `K`, where `K[c]` counts the labels ending in a symbol smaller than `c`;
//! * `B`, marking the first outgoing edge of every node.
//!
//! Reads are padded as `$^(k-1) R $`. An ending node `A$` owns one flagged
//! `$` edge with no target so that every node has at least one edge.

mod build;

use std::io::{self, Read, Write};

use log::warn;

use crate::error::{bounds, Error, Result};
use crate::sequence::{DnaString, ReadSet, Symbol};
use crate::succinct::{codec, BitBuf, BitVector, Persist, SymbolSequence};

use build::{collect_edges, NodeKey};

const TAG: u8 = 0xD6;
pub const MAX_K: usize = 63;

/// Node identifier: the 1-based rank of the node in BOSS order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(usize);

impl NodeId {
    pub fn new(id: usize) -> Self {
        NodeId(id)
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// The all-dummy root node.
    pub const ROOT: NodeId = NodeId(1);
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Edge code in `E`: symbol code minus one, plus five when flagged.
#[inline]
fn edge_code(symbol: u8, flagged: bool) -> u8 {
    symbol - 1 + if flagged { 5 } else { 0 }
}

#[inline]
fn code_symbol(code: u8) -> u8 {
    code % 5 + 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BossIndex {
    k: usize,
    edges: SymbolSequence,
    /// `counts[c]` for `c` in `1..=6`; index 0 is unused.
    counts: [usize; 7],
    first_edge: BitVector,
    /// Leading dummies in each node label, derived after loading.
    lead_dummies: Vec<u8>,
}

/// Strings of the doubled read set that are long enough to index, and how
/// many reads were skipped for being shorter than `k`.
pub fn indexable_strings(reads: &ReadSet, k: usize) -> (Vec<DnaString>, usize) {
    let mut skipped = 0;
    let strings = reads
        .with_rc()
        .into_iter()
        .filter(|s| {
            let keep = s.len() >= k;
            skipped += usize::from(!keep);
            keep
        })
        .collect();
    (strings, skipped)
}

impl BossIndex {
    /// Builds the index of order `k` over the reads and their reverse
    /// complements. Reads shorter than `k` are skipped with a warning.
    pub fn build(reads: &ReadSet, k: usize) -> Result<Self> {
        if !(3..=MAX_K).contains(&k) {
            return Err(Error::BadOrder(k));
        }
        let (strings, skipped) = indexable_strings(reads, k);
        if skipped > 0 {
            warn!("skipped {skipped} strings shorter than k = {k}");
        }
        Self::from_strings(&strings, k)
    }

    /// Builds from an explicit list of solid strings, all of length `>= k`.
    pub fn from_strings(strings: &[DnaString], k: usize) -> Result<Self> {
        if !(3..=MAX_K).contains(&k) {
            return Err(Error::BadOrder(k));
        }
        if strings.is_empty() {
            return Err(Error::EmptyIndex);
        }
        if let Some(s) = strings.iter().find(|s| s.len() < k || !s.is_solid()) {
            return Err(Error::InvalidAlphabet(format!("string {s} is not a solid string of length >= {k}")));
        }
        let sorted = collect_edges(strings, k);

        let mut codes = Vec::with_capacity(sorted.len());
        let mut first = BitBuf::new();
        let mut counts = [0usize; 7];
        let mut prev_node: Option<NodeKey> = None;
        let mut group = None;
        let mut group_seen = 0u8;
        for e in &sorted {
            let new_node = prev_node != Some(e.node);
            first.push(new_node);
            if new_node {
                counts[e.node.last_symbol().code() as usize + 1] += 1;
                let g = e.node.suffix_group(k);
                if group != Some(g) {
                    group = Some(g);
                    group_seen = 0;
                }
                prev_node = Some(e.node);
            }
            let bit = 1u8 << e.symbol;
            let flagged = e.node.is_ending() || group_seen & bit != 0;
            if !e.node.is_ending() {
                group_seen |= bit;
            }
            codes.push(edge_code(e.symbol, flagged));
        }
        for c in 1..7 {
            counts[c] += counts[c - 1];
        }
        let mut index = BossIndex {
            k,
            edges: SymbolSequence::new(10, &codes)?,
            counts,
            first_edge: BitVector::new(first),
            lead_dummies: Vec::new(),
        };
        index.validate()?;
        index.derive_taxonomy();
        Ok(index)
    }

    /// Cross-checks `E`, `K` and `B` for internal consistency.
    fn validate(&self) -> Result<()> {
        let n = self.node_count();
        let corrupt = |msg: &str| Err(Error::CorruptIndex(msg.to_string()));
        if n == 0 || self.first_edge.count_ones() != n || self.edges.len() != self.first_edge.len() {
            return corrupt("node boundaries disagree with the edge array");
        }
        if !self.first_edge.bit(0) {
            return corrupt("first edge is not a node boundary");
        }
        if self.counts[1] != 0 || self.counts.windows(2).skip(1).any(|w| w[0] > w[1]) {
            return corrupt("K is not a cumulative count");
        }
        // every node but the root is the target of exactly one unflagged edge
        for c in 1..=5u8 {
            let targets = self.counts[c as usize + 1] - self.offset(c);
            if self.edges.count(edge_code(c, false)) != targets {
                return corrupt("edge labels do not match node counts");
            }
        }
        if self.counts[2] == 0 {
            return corrupt("missing root node");
        }
        Ok(())
    }

    /// Computes the number of leading dummies of every node by walking the
    /// dummy-prefixed part of the graph from the root.
    fn derive_taxonomy(&mut self) {
        let n = self.node_count();
        let mut lead = vec![0u8; n + 1];
        let root_lead = (self.k - 1) as u8;
        lead[1] = root_lead;
        let mut stack = vec![NodeId::ROOT];
        while let Some(v) = stack.pop() {
            let d = lead[v.0];
            if d < 2 {
                continue;
            }
            let (start, end) = self.edge_span(v);
            for p in start..end {
                if let Some(u) = self.target_of(p) {
                    lead[u.0] = d - 1;
                    stack.push(u);
                }
            }
        }
        self.lead_dummies = lead;
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.first_edge.count_ones()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `K[c]` for `c` in `1..=6`.
    pub fn k_array(&self) -> &[usize] {
        &self.counts[1..]
    }

    /// The `E` array as (symbol, flagged) pairs.
    pub fn edge_labels(&self) -> impl Iterator<Item = (Symbol, bool)> + '_ {
        (0..self.edge_count()).map(move |i| {
            let c = self.edges.code_at(i);
            (Symbol::from_code(code_symbol(c)).unwrap(), c >= 5)
        })
    }

    pub fn first_edge_bits(&self) -> &BitVector {
        &self.first_edge
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (1..=self.node_count()).map(NodeId)
    }

    /// Validates a node identifier.
    pub fn node(&self, id: usize) -> Result<NodeId> {
        if id == 0 || id > self.node_count() {
            Err(bounds(id, self.node_count()))
        } else {
            Ok(NodeId(id))
        }
    }

    #[inline]
    fn check(&self, v: NodeId) -> Result<()> {
        self.node(v.0).map(|_| ())
    }

    /// First node id (0-based) among nodes whose label ends in `c`, skipping
    /// the root for `$`.
    #[inline]
    fn offset(&self, c: u8) -> usize {
        self.counts[c as usize] + usize::from(c == Symbol::DUMMY.code())
    }

    /// Half-open 0-based range of `v`'s edges in `E`.
    #[inline]
    fn edge_span(&self, v: NodeId) -> (usize, usize) {
        let start = self.first_edge.select_index(v.0 - 1);
        let end = if v.0 == self.node_count() { self.edge_count() } else { self.first_edge.select_index(v.0) };
        (start, end)
    }

    #[inline]
    fn node_of_edge(&self, p: usize) -> NodeId {
        NodeId(self.first_edge.rank_prefix(p + 1))
    }

    /// Target of the edge at 0-based position `p`, `None` for terminal edges.
    fn target_of(&self, p: usize) -> Option<NodeId> {
        let code = self.edges.code_at(p);
        let symbol = code_symbol(code);
        let unflagged = edge_code(symbol, false);
        let rank = if code == unflagged {
            self.edges.rank_prefix(unflagged, p + 1)
        } else {
            self.edges.rank_prefix(unflagged, p)
        };
        if rank == 0 {
            return None;
        }
        // Terminal edges sit at the front of E, before any unflagged `$`.
        Some(NodeId(self.offset(symbol) + rank))
    }

    /// Last symbol of `v`'s label.
    fn last_symbol(&self, v: NodeId) -> u8 {
        // first c with v <= K[c + 1]
        (1..=5u8).find(|&c| v.0 <= self.counts[c as usize + 1]).expect("valid node")
    }

    #[inline]
    fn is_ending_raw(&self, v: NodeId) -> bool {
        v.0 > 1 && v.0 <= self.counts[2]
    }

    pub fn outdegree(&self, v: NodeId) -> Result<usize> {
        self.check(v)?;
        let (s, e) = self.edge_span(v);
        Ok(e - s)
    }

    /// Node reached from `v` through the edge labelled `a`.
    pub fn forward(&self, v: NodeId, a: Symbol) -> Result<Option<NodeId>> {
        self.check(v)?;
        let (s, e) = self.edge_span(v);
        Ok((s..e)
            .find(|&p| code_symbol(self.edges.code_at(p)) == a.code())
            .and_then(|p| self.target_of(p)))
    }

    /// Target of the `r`-th smallest outgoing edge of `v` (1-based). The
    /// terminal edge of an ending node has no target.
    pub fn forward_r(&self, v: NodeId, r: usize) -> Result<Option<NodeId>> {
        self.check(v)?;
        let (s, e) = self.edge_span(v);
        if r == 0 || r > e - s {
            return Err(bounds(r, e - s));
        }
        Ok(self.target_of(s + r - 1))
    }

    /// Symbol of the `r`-th smallest outgoing edge of `v`.
    pub fn edge_symbol(&self, v: NodeId, r: usize) -> Result<Symbol> {
        self.check(v)?;
        let (s, e) = self.edge_span(v);
        if r == 0 || r > e - s {
            return Err(bounds(r, e - s));
        }
        Ok(Symbol::from_code(code_symbol(self.edges.code_at(s + r - 1))).unwrap())
    }

    /// Outgoing edges of `v` as `(symbol, target)` pairs in symbol order.
    pub fn successors(&self, v: NodeId) -> Result<Vec<(Symbol, NodeId)>> {
        self.check(v)?;
        let (s, e) = self.edge_span(v);
        Ok((s..e)
            .filter_map(|p| {
                let sym = Symbol::from_code(code_symbol(self.edges.code_at(p))).unwrap();
                self.target_of(p).map(|t| (sym, t))
            })
            .collect())
    }

    /// Predecessors of `v` in BOSS order.
    pub fn backward(&self, v: NodeId) -> Result<Vec<NodeId>> {
        self.check(v)?;
        let mut out = Vec::new();
        self.for_each_predecessor(v, |u| out.push(u));
        Ok(out)
    }

    /// The `j`-th predecessor of `v` (1-based).
    pub fn backward_r(&self, v: NodeId, j: usize) -> Result<NodeId> {
        let preds = self.backward(v)?;
        preds.get(j.wrapping_sub(1)).copied().ok_or_else(|| bounds(j, preds.len()))
    }

    pub fn indegree(&self, v: NodeId) -> Result<usize> {
        self.check(v)?;
        let mut n = 0;
        self.for_each_predecessor(v, |_| n += 1);
        Ok(n)
    }

    fn for_each_predecessor(&self, v: NodeId, mut f: impl FnMut(NodeId)) {
        if v == NodeId::ROOT {
            return;
        }
        let c = self.last_symbol(v);
        let j = v.0 - self.offset(c);
        let unflagged = edge_code(c, false);
        let flagged = edge_code(c, true);
        let p = self.edges.select_index(unflagged, j - 1).expect("every node has an incoming edge");
        f(self.node_of_edge(p));
        let limit = self.edges.select_index(unflagged, j).unwrap_or(self.edge_count());
        let mut r = self.edges.rank_prefix(flagged, p + 1);
        while let Some(q) = self.edges.select_index(flagged, r) {
            if q >= limit {
                break;
            }
            f(self.node_of_edge(q));
            r += 1;
        }
    }

    /// First predecessor, without allocating.
    fn first_predecessor(&self, v: NodeId) -> Option<NodeId> {
        if v == NodeId::ROOT {
            return None;
        }
        let c = self.last_symbol(v);
        let j = v.0 - self.offset(c);
        let p = self.edges.select_index(edge_code(c, false), j - 1)?;
        Some(self.node_of_edge(p))
    }

    /// The (k-1)-symbol label of `v`, dummies included.
    pub fn node_label(&self, v: NodeId) -> Result<DnaString> {
        self.check(v)?;
        let mut label = vec![Symbol::DUMMY; self.k - 1];
        let mut cur = Some(v);
        for slot in (0..self.k - 1).rev() {
            match cur {
                Some(u) if u != NodeId::ROOT => {
                    label[slot] = Symbol::from_code(self.last_symbol(u)).unwrap();
                    cur = self.first_predecessor(u);
                }
                _ => break,
            }
        }
        Ok(DnaString::from_symbols(label))
    }

    /// Node labelled `label`, if present.
    pub fn label_to_node(&self, label: &DnaString) -> Result<Option<NodeId>> {
        let syms = label.symbols();
        if syms.len() != self.k - 1 {
            return Err(Error::BadLabel { got: syms.len(), expected: self.k - 1 });
        }
        let lead = syms.iter().take_while(|s| s.is_dummy()).count();
        if lead == syms.len() {
            return Ok(Some(NodeId::ROOT));
        }
        // 0-based half-open range of nodes whose label ends with the prefix read so far
        let (mut lo, mut hi, rest) = if lead > 0 {
            (0, 1, &syms[lead..])
        } else {
            let c = syms[0].code() as usize;
            (self.counts[c], self.counts[c + 1], &syms[1..])
        };
        for s in rest {
            if lo >= hi {
                return Ok(None);
            }
            let e_lo = self.first_edge.select_index(lo);
            let e_hi = if hi == self.node_count() { self.edge_count() } else { self.first_edge.select_index(hi) };
            let code = edge_code(s.code(), false);
            let base = self.offset(s.code());
            lo = base + self.edges.rank_prefix(code, e_lo);
            hi = base + self.edges.rank_prefix(code, e_hi);
        }
        Ok((hi == lo + 1).then_some(NodeId(lo + 1)))
    }

    pub fn is_starting(&self, v: NodeId) -> Result<bool> {
        self.check(v)?;
        Ok(self.lead_dummies[v.0] == 1)
    }

    pub fn is_ending(&self, v: NodeId) -> Result<bool> {
        self.check(v)?;
        Ok(self.is_ending_raw(v))
    }

    pub fn is_solid(&self, v: NodeId) -> Result<bool> {
        self.check(v)?;
        Ok(self.lead_dummies[v.0] == 0 && !self.is_ending_raw(v))
    }

    /// Solid with at least one predecessor of outdegree greater than one.
    pub fn is_critical(&self, v: NodeId) -> Result<bool> {
        if !self.is_solid(v)? {
            return Ok(false);
        }
        let mut critical = false;
        self.for_each_predecessor(v, |u| {
            let (s, e) = self.edge_span(u);
            critical |= e - s > 1;
        });
        Ok(critical)
    }
}

impl Persist for BossIndex {
    fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        codec::put_u8(w, TAG)?;
        codec::put_u8(w, self.k as u8)?;
        for &c in &self.counts[1..] {
            codec::put_usize(w, c)?;
        }
        self.edges.write_to(w)?;
        self.first_edge.write_to(w)
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        codec::expect_tag(r, TAG, "BOSS index")?;
        let k = codec::get_u8(r)? as usize;
        if !(3..=MAX_K).contains(&k) {
            return Err(Error::CorruptIndex(format!("stored order {k} out of range")));
        }
        let mut counts = [0usize; 7];
        for c in counts.iter_mut().skip(1) {
            *c = codec::get_usize(r)?;
        }
        let edges = SymbolSequence::read_from(r)?;
        let first_edge = BitVector::read_from(r)?;
        if edges.sigma() != 10 || counts[6] != first_edge.count_ones() {
            return Err(Error::CorruptIndex("BOSS header mismatch".into()));
        }
        let mut index = BossIndex { k, edges, counts, first_edge, lead_dummies: Vec::new() };
        index.validate()?;
        index.derive_taxonomy();
        Ok(index)
    }
}
