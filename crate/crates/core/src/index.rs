//! The complete colored index: graph topology plus compressed colors.

use std::fmt;

use log::info;

use crate::boss::{indexable_strings, BossIndex};
use crate::coloring::{color_all, mark_colorable, Coloring};
use crate::colors::CompressedColors;
use crate::error::Result;
use crate::sequence::ReadSet;

/// Facts about the input kept alongside the index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IndexMeta {
    pub reads: u64,
    /// Size of the reads at one byte per symbol.
    pub plain_bytes: u64,
    pub rejected_non_acgt: u64,
    pub rejected_short: u64,
    pub duplicates: u64,
    /// Strings of the doubled set left out for being shorter than `k`.
    pub skipped_short: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredIndex {
    pub boss: BossIndex,
    pub colors: CompressedColors,
    pub meta: IndexMeta,
}

impl ColoredIndex {
    pub fn build(reads: &ReadSet, k: usize, threads: usize) -> Result<Self> {
        Ok(Self::build_with_coloring(reads, k, threads)?.0)
    }

    /// Builds the index and also returns the uncompressed coloring.
    pub fn build_with_coloring(reads: &ReadSet, k: usize, threads: usize) -> Result<(Self, Coloring)> {
        let boss = BossIndex::build(reads, k)?;
        info!("graph: {} nodes, {} edges", boss.node_count(), boss.edge_count());
        let map = mark_colorable(&boss)?;
        let (strings, skipped) = indexable_strings(reads, k);
        let coloring = color_all(&boss, &map, &strings, threads)?;
        info!("coloring: {} colorable nodes, {} colors", map.count(), coloring.table.num_colors());
        let colors = CompressedColors::compress(&coloring.table, &map)?;
        let stats = reads.stats();
        let meta = IndexMeta {
            reads: reads.len() as u64,
            plain_bytes: reads.total_symbols() as u64,
            rejected_non_acgt: stats.rejected_non_acgt as u64,
            rejected_short: stats.rejected_short as u64,
            duplicates: stats.duplicates as u64,
            skipped_short: skipped as u64,
        };
        Ok((ColoredIndex { boss, colors, meta }, coloring))
    }

    pub fn k(&self) -> usize {
        self.boss.k()
    }
}

/// Size and coloring figures of an index.
#[derive(Clone, Debug, PartialEq)]
pub struct StatsRecord {
    pub k: usize,
    pub reads: u64,
    pub total_nodes: usize,
    pub solid_nodes: usize,
    pub edge_count: usize,
    pub colored_nodes: usize,
    pub num_colors: u32,
    pub index_bytes: u64,
    pub plain_bytes: u64,
    pub compression_rate: f64,
    pub colored_fraction: f64,
    pub ambiguous_count: Option<usize>,
}

impl StatsRecord {
    /// `index_bytes` is the size of the serialized container.
    pub fn new(index: &ColoredIndex, index_bytes: u64, ambiguous_count: Option<usize>) -> Self {
        let boss = &index.boss;
        let total_nodes = boss.node_count();
        let solid_nodes = boss.nodes().filter(|&v| boss.is_solid(v).unwrap_or(false)).count();
        let colored_nodes = index.colors.colored_nodes();
        StatsRecord {
            k: boss.k(),
            reads: index.meta.reads,
            total_nodes,
            solid_nodes,
            edge_count: boss.edge_count(),
            colored_nodes,
            num_colors: index.colors.num_colors(),
            index_bytes,
            plain_bytes: index.meta.plain_bytes,
            compression_rate: if index_bytes == 0 { 0.0 } else { index.meta.plain_bytes as f64 / index_bytes as f64 },
            colored_fraction: if total_nodes == 0 { 0.0 } else { colored_nodes as f64 / total_nodes as f64 },
            ambiguous_count,
        }
    }

    /// `key=value` lines, one per field.
    pub fn key_values(&self) -> Vec<(&'static str, String)> {
        let mut kv = vec![
            ("k", self.k.to_string()),
            ("reads", self.reads.to_string()),
            ("total_nodes", self.total_nodes.to_string()),
            ("solid_nodes", self.solid_nodes.to_string()),
            ("edge_count", self.edge_count.to_string()),
            ("colored_nodes", self.colored_nodes.to_string()),
            ("num_colors", self.num_colors.to_string()),
            ("index_bytes", self.index_bytes.to_string()),
            ("plain_bytes", self.plain_bytes.to_string()),
            ("compression_rate", format!("{:.4}", self.compression_rate)),
            ("colored_fraction", format!("{:.4}", self.colored_fraction)),
        ];
        if let Some(a) = self.ambiguous_count {
            kv.push(("ambiguous_count", a.to_string()));
        }
        kv
    }

    pub fn table(&self) -> String {
        let kv = self.key_values();
        let width = kv.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        kv.iter().map(|(k, v)| format!("{k:<width$}  {v:>14}\n")).collect()
    }
}

impl fmt::Display for StatsRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.key_values() {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}
