//! Partial greedy coloring of the read paths.
//!
//! Only starting, ending and critical nodes carry colors. Every string of
//! the doubled read set gets one color: the smallest one not already used
//! on its colorable nodes or on the neighbouring nodes it must be told apart
//! from. Scanning a string is independent of the others and runs in
//! parallel; colors are then handed out one string at a time, in input
//! order, so the result does not depend on the thread count.

use rayon::prelude::*;

use crate::boss::{indexable_strings, BossIndex, NodeId};
use crate::error::{Error, Result};
use crate::sequence::{DnaString, ReadSet, Symbol};
use crate::succinct::{BitBuf, BitVector};

/// Strings scanned per parallel batch before their colors are assigned.
const BATCH: usize = 4096;

/// The bitmap `N` of nodes that need a color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorableMap {
    bits: BitVector,
}

impl ColorableMap {
    pub fn from_bits(bits: BitVector) -> Self {
        ColorableMap { bits }
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    /// Number of colorable nodes, `p`.
    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.get() >= 1 && v.get() <= self.bits.len() && self.bits.bit(v.get() - 1)
    }

    /// 1-based rank of `v` among colorable nodes, if it is one.
    pub fn rank(&self, v: NodeId) -> Option<usize> {
        self.contains(v).then(|| self.bits.rank_prefix(v.get()))
    }

    /// The colorable node of rank `r` (1-based).
    pub fn node_at(&self, r: usize) -> Result<NodeId> {
        self.bits.select1(r).map(NodeId::new)
    }
}

/// Marks every starting, ending and critical node.
pub fn mark_colorable(boss: &BossIndex) -> Result<ColorableMap> {
    let n = boss.node_count();
    let mut buf = BitBuf::with_len(n);
    for v in boss.nodes() {
        if boss.is_starting(v)? || boss.is_ending(v)? {
            buf.set(v.get() - 1);
        }
        // successors of a branching node are critical when solid
        if boss.outdegree(v)? > 1 {
            for (_, u) in boss.successors(v)? {
                if boss.is_solid(u)? {
                    buf.set(u.get() - 1);
                }
            }
        }
    }
    Ok(ColorableMap { bits: BitVector::new(buf) })
}

/// Work item of one string: the colorable ranks on its path (`w`) and the
/// ranks whose colors it must avoid besides those (`i`). Both are sorted
/// and duplicate free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringJob {
    pub read_index: usize,
    pub w: Vec<usize>,
    pub i: Vec<usize>,
    pub assigned_color: Option<u32>,
}

/// The nodes spelling `$ read $`, from its starting node to its ending node.
pub fn read_path(boss: &BossIndex, read: &DnaString) -> Result<Vec<NodeId>> {
    let k = boss.k();
    let syms = read.symbols();
    if syms.len() < k {
        return Err(Error::CorruptIndex(format!("string of length {} is shorter than k = {k}", syms.len())));
    }
    let mut label = Vec::with_capacity(k - 1);
    label.push(Symbol::DUMMY);
    label.extend_from_slice(&syms[..k - 2]);
    let missing = || Error::CorruptIndex(format!("path of {read} is not in the index"));
    let mut v = boss.label_to_node(&DnaString::from_symbols(label))?.ok_or_else(missing)?;
    let mut path = Vec::with_capacity(syms.len() - k + 4);
    path.push(v);
    for &s in syms[k - 2..].iter().chain(std::iter::once(&Symbol::DUMMY)) {
        v = boss.forward(v, s)?.ok_or_else(missing)?;
        path.push(v);
    }
    Ok(path)
}

/// Collects the ranks a string colors and the ranks it must inspect.
pub fn scan_read(boss: &BossIndex, map: &ColorableMap, read: &DnaString) -> Result<ColoringJob> {
    let path = read_path(boss, read)?;
    let mut w = Vec::new();
    let mut inspect = Vec::new();
    let push_successors = |u: NodeId, into: &mut Vec<usize>| -> Result<()> {
        if boss.outdegree(u)? > 1 {
            into.extend(boss.successors(u)?.into_iter().filter_map(|(_, s)| map.rank(s)));
        }
        Ok(())
    };
    for &v in &path {
        push_successors(v, &mut inspect)?;
        if boss.indegree(v)? > 1 {
            for u in boss.backward(v)? {
                push_successors(u, &mut inspect)?;
            }
        }
        w.extend(map.rank(v));
    }
    let (first, last) = (path[0], path[path.len() - 1]);
    inspect.extend(map.rank(first));
    inspect.extend(map.rank(last));
    for set in [&mut w, &mut inspect] {
        set.sort_unstable();
        set.dedup();
    }
    Ok(ColoringJob { read_index: 0, w, i: inspect, assigned_color: None })
}

/// The build-time color lists `M`, one sorted list per colorable node.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DynamicColorTable {
    rows: Vec<Vec<u32>>,
}

impl DynamicColorTable {
    pub fn new(p: usize) -> Self {
        DynamicColorTable { rows: vec![Vec::new(); p] }
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Self {
        DynamicColorTable { rows }
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Colors of the colorable node of rank `r` (1-based).
    pub fn row(&self, r: usize) -> Option<&[u32]> {
        r.checked_sub(1).and_then(|i| self.rows.get(i)).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Largest color in use; colors are `1..=num_colors`.
    pub fn num_colors(&self) -> u32 {
        self.rows.iter().filter_map(|r| r.last()).copied().max().unwrap_or(0)
    }

    /// Gives `job` the smallest color absent from all rows it touches and
    /// records it on every rank of `job.w`.
    pub fn assign_color(&mut self, job: &mut ColoringJob) -> Result<u32> {
        let mut used: Vec<u32> = Vec::new();
        for &r in job.i.iter().chain(&job.w) {
            let row = r.checked_sub(1).and_then(|i| self.rows.get(i)).ok_or_else(|| crate::error::bounds(r, self.rows.len()))?;
            used.extend_from_slice(row);
        }
        used.sort_unstable();
        used.dedup();
        let color = used.iter().zip(1u32..).find(|&(&u, want)| u != want).map_or(used.len() as u32 + 1, |(_, want)| want);
        for &r in &job.w {
            let row = &mut self.rows[r - 1];
            if let Err(at) = row.binary_search(&color) {
                row.insert(at, color);
            }
        }
        job.assigned_color = Some(color);
        Ok(color)
    }
}

/// Output of [`color_all`]: the table and the color given to each string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub table: DynamicColorTable,
    pub assigned: Vec<u32>,
}

/// Colors `strings` in order. Scans run on `threads` workers.
pub fn color_all(boss: &BossIndex, map: &ColorableMap, strings: &[DnaString], threads: usize) -> Result<Coloring> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    let mut table = DynamicColorTable::new(map.count());
    let mut assigned = Vec::with_capacity(strings.len());
    for (b, batch) in strings.chunks(BATCH).enumerate() {
        let jobs: Vec<Result<ColoringJob>> =
            pool.install(|| batch.par_iter().map(|s| scan_read(boss, map, s)).collect());
        for (j, job) in jobs.into_iter().enumerate() {
            let mut job = job?;
            job.read_index = b * BATCH + j;
            assigned.push(table.assign_color(&mut job)?);
        }
    }
    Ok(Coloring { table, assigned })
}

/// Colors the doubled read set, skipping strings shorter than `k` as the
/// index build does.
pub fn color_reads(boss: &BossIndex, map: &ColorableMap, reads: &ReadSet, threads: usize) -> Result<Coloring> {
    let (strings, _) = indexable_strings(reads, boss.k());
    color_all(boss, map, &strings, threads)
}
