//! Walks over the colored graph: rebuilding reads and assembling contigs.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::boss::{BossIndex, NodeId};
use crate::colors::CompressedColors;
use crate::error::{Error, Result};
use crate::sequence::{DnaString, Symbol};

/// Starting nodes in BOSS order.
pub fn starting_nodes(boss: &BossIndex) -> Vec<NodeId> {
    boss.nodes().filter(|&v| boss.is_starting(v).unwrap_or(false)).collect()
}

fn require_start(boss: &BossIndex, v: NodeId) -> Result<()> {
    if boss.is_starting(v)? {
        Ok(())
    } else {
        Err(Error::BadStart(v.get()))
    }
}

fn colors_of(colors: &CompressedColors, v: NodeId) -> Vec<u32> {
    let mut out = Vec::new();
    colors.colors_into(v, &mut out);
    out
}

/// Result of following one color from a starting node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Walk {
    Spelled(DnaString),
    /// Some branching node had zero or several successors with the color.
    Ambiguous,
}

/// Follows `color` from the starting node `v` to an ending node.
pub fn walk_color(boss: &BossIndex, colors: &CompressedColors, v: NodeId, color: u32) -> Result<Walk> {
    require_start(boss, v)?;
    let mut spelled = boss.node_label(v)?.symbols().to_vec();
    let mut cur = v;
    // a safe path visits every edge at most once
    let mut budget = boss.edge_count();
    while !boss.is_ending(cur)? {
        if budget == 0 {
            return Ok(Walk::Ambiguous);
        }
        budget -= 1;
        let succ = boss.successors(cur)?;
        let (symbol, next) = if succ.len() == 1 {
            succ[0]
        } else {
            let mut colored = succ.iter().filter(|(_, u)| colors.has_color(*u, color));
            match (colored.next(), colored.next()) {
                (Some(&hit), None) => hit,
                _ => return Ok(Walk::Ambiguous),
            }
        };
        spelled.push(symbol);
        cur = next;
    }
    Ok(Walk::Spelled(DnaString::from_symbols(spelled).strip_dummies()))
}

/// Rebuilds every string whose color leads unambiguously from `v` to an
/// ending node.
pub fn build_seqs(boss: &BossIndex, colors: &CompressedColors, v: NodeId) -> Result<Vec<DnaString>> {
    Ok(build_from(boss, colors, v)?.0)
}

fn build_from(boss: &BossIndex, colors: &CompressedColors, v: NodeId) -> Result<(Vec<DnaString>, usize)> {
    require_start(boss, v)?;
    let mut out = Vec::new();
    let mut ambiguous = 0;
    for color in colors_of(colors, v) {
        match walk_color(boss, colors, v, color)? {
            Walk::Spelled(s) => out.push(s),
            Walk::Ambiguous => ambiguous += 1,
        }
    }
    Ok((out, ambiguous))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StartStats {
    pub start: NodeId,
    pub recovered: usize,
    pub ambiguous: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReconstructionReport {
    /// Rebuilt strings, in the order of their starting nodes.
    pub recovered: Vec<DnaString>,
    /// Aborted walks, one per (starting node, color).
    pub ambiguous_count: usize,
    pub per_start: Vec<StartStats>,
}

impl ReconstructionReport {
    /// Fraction of `reads` found among the recovered strings, up to
    /// reverse complement. Empty input counts as fully recovered.
    pub fn recovered_fraction(&self, reads: &[DnaString]) -> f64 {
        if reads.is_empty() {
            return 1.0;
        }
        let found: HashSet<&DnaString> = self.recovered.iter().collect();
        let hits = reads
            .iter()
            .filter(|r| found.contains(r) || r.reverse_complement().is_ok_and(|rc| found.contains(&rc)))
            .count();
        hits as f64 / reads.len() as f64
    }

    /// Recovered strings that are not, up to reverse complement, in `reads`.
    pub fn foreign<'a>(&'a self, reads: &[DnaString]) -> Vec<&'a DnaString> {
        let known: HashSet<&DnaString> = reads.iter().collect();
        self.recovered
            .iter()
            .filter(|s| !known.contains(s) && !s.reverse_complement().is_ok_and(|rc| known.contains(&rc)))
            .collect()
    }
}

/// Runs [`build_seqs`] from every starting node, in parallel.
pub fn reconstruct_all(boss: &BossIndex, colors: &CompressedColors) -> Result<ReconstructionReport> {
    let starts = starting_nodes(boss);
    let results: Vec<Result<(Vec<DnaString>, usize)>> =
        starts.par_iter().map(|&v| build_from(boss, colors, v)).collect();
    let mut report = ReconstructionReport::default();
    for (&start, res) in starts.iter().zip(results) {
        let (seqs, ambiguous) = res?;
        report.per_start.push(StartStats { start, recovered: seqs.len(), ambiguous });
        report.ambiguous_count += ambiguous;
        report.recovered.extend(seqs);
    }
    Ok(report)
}

fn check_threshold(x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::BadThreshold(x))
    }
}

/// State of a contig walk: active reads `Q` (color to starting node) and
/// finished reads `L`.
#[derive(Clone, Debug, Default)]
pub struct ContigWalkState {
    pub active: BTreeMap<u32, NodeId>,
    pub finished: HashSet<(u32, NodeId)>,
    pub spelled: Vec<Symbol>,
}

impl ContigWalkState {
    fn retire(&mut self, color: u32) {
        if let Some(start) = self.active.remove(&color) {
            self.finished.insert((color, start));
        }
    }

    /// Every read that took part in the walk.
    fn reads(&self) -> impl Iterator<Item = (u32, NodeId)> + '_ {
        self.active.iter().map(|(&c, &s)| (c, s)).chain(self.finished.iter().copied())
    }
}

/// Assembles the contig that starts at `v`, following at each branch the
/// one successor that carries at least a fraction `x` of the active colors.
pub fn contig_assm(boss: &BossIndex, colors: &CompressedColors, v: NodeId, x: f64) -> Result<DnaString> {
    Ok(contig_walk(boss, colors, v, x)?.0)
}

fn contig_walk(boss: &BossIndex, colors: &CompressedColors, v: NodeId, x: f64) -> Result<(DnaString, ContigWalkState)> {
    check_threshold(x)?;
    require_start(boss, v)?;
    let mut st = ContigWalkState { spelled: boss.node_label(v)?.symbols().to_vec(), ..Default::default() };
    for c in colors_of(colors, v) {
        st.active.insert(c, v);
    }
    let mut cur = v;
    let mut budget = boss.edge_count();
    while budget > 0 {
        budget -= 1;
        for u in boss.backward(cur)? {
            if boss.is_starting(u)? {
                for c in colors_of(colors, u) {
                    if !st.finished.contains(&(c, u)) {
                        st.active.insert(c, u);
                    }
                }
            }
        }
        let succ = boss.successors(cur)?;
        if succ.len() == 1 {
            let (symbol, next) = succ[0];
            if boss.is_ending(next)? {
                for c in colors_of(colors, next) {
                    st.retire(c);
                }
                break;
            }
            st.spelled.push(symbol);
            cur = next;
            continue;
        }

        let mut branches = Vec::with_capacity(succ.len());
        for &(symbol, u) in &succ {
            branches.push((symbol, u, boss.is_ending(u)?, colors_of(colors, u)));
        }
        let shared = branches.iter().enumerate().any(|(i, a)| {
            branches[i + 1..].iter().any(|b| a.3.iter().any(|c| b.3.binary_search(c).is_ok()))
        });
        let q = st.active.len();
        let chosen: Vec<usize> = (0..branches.len())
            .filter(|&i| {
                let (_, _, ending, ref cols) = branches[i];
                let hits = cols.iter().filter(|c| st.active.contains_key(c)).count();
                !ending && q > 0 && hits as f64 >= x * q as f64
            })
            .collect();
        for (_, _, ending, cols) in &branches {
            if *ending {
                for &c in cols {
                    st.retire(c);
                }
            }
        }
        if shared || chosen.len() != 1 {
            break;
        }
        let (symbol, next, _, ref cols) = branches[chosen[0]];
        st.active.retain(|c, _| cols.binary_search(c).is_ok());
        st.spelled.push(symbol);
        cur = next;
    }
    let contig = DnaString::from_symbols(std::mem::take(&mut st.spelled)).strip_dummies();
    Ok((contig, st))
}

/// Which starting nodes [`assemble_all`] walks from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StartPolicy {
    /// Every starting node.
    #[default]
    All,
    /// Skip a starting node once all of its reads took part in an earlier
    /// contig. Much faster on deep coverage, where each contig would
    /// otherwise be re-walked from the start of every read inside it.
    SkipAbsorbed,
}

/// Contigs from the starting nodes, deduplicated up to reverse complement
/// and sorted longest first.
pub fn assemble_all(boss: &BossIndex, colors: &CompressedColors, x: f64, policy: StartPolicy) -> Result<Vec<DnaString>> {
    check_threshold(x)?;
    let mut absorbed: HashSet<(u32, NodeId)> = HashSet::new();
    let mut seen: HashSet<DnaString> = HashSet::new();
    let mut contigs = Vec::new();
    for v in starting_nodes(boss) {
        if policy == StartPolicy::SkipAbsorbed {
            let own = colors_of(colors, v);
            if !own.is_empty() && own.iter().all(|&c| absorbed.contains(&(c, v))) {
                continue;
            }
        }
        let (contig, st) = contig_walk(boss, colors, v, x)?;
        if policy == StartPolicy::SkipAbsorbed {
            absorbed.extend(st.reads());
        }
        if contig.is_empty() {
            continue;
        }
        let key = contig.canonical()?;
        if seen.insert(key) {
            contigs.push(contig);
        }
    }
    contigs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.symbols().cmp(b.symbols())));
    Ok(contigs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{color_reads, mark_colorable};
    use crate::sequence::ReadSet;

    fn dna(s: &str) -> DnaString {
        s.parse().unwrap()
    }

    fn index(reads: &[&str], k: usize) -> (BossIndex, CompressedColors) {
        let reads: ReadSet = reads.iter().map(|r| dna(r)).collect();
        let boss = BossIndex::build(&reads, k).unwrap();
        let map = mark_colorable(&boss).unwrap();
        let coloring = color_reads(&boss, &map, &reads, 1).unwrap();
        let cc = CompressedColors::compress(&coloring.table, &map).unwrap();
        (boss, cc)
    }

    fn node(boss: &BossIndex, label: &str) -> NodeId {
        boss.label_to_node(&dna(label)).unwrap().unwrap()
    }

    fn strings(v: &[DnaString]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn e1_build_seqs() {
        let (boss, cc) = index(&["tacgt"], 4);
        assert_eq!(strings(&build_seqs(&boss, &cc, node(&boss, "$ta")).unwrap()), ["tacgt"]);
        assert_eq!(strings(&build_seqs(&boss, &cc, node(&boss, "$ac")).unwrap()), ["acgta"]);
        assert!(matches!(build_seqs(&boss, &cc, node(&boss, "acg")), Err(Error::BadStart(_))));
    }

    #[test]
    fn e1_reconstruct_all() {
        let (boss, cc) = index(&["tacgt"], 4);
        let report = reconstruct_all(&boss, &cc).unwrap();
        let mut got = strings(&report.recovered);
        got.sort();
        assert_eq!(got, ["acgta", "tacgt"]);
        assert_eq!(report.ambiguous_count, 0);
        assert_eq!(report.recovered_fraction(&[dna("tacgt")]), 1.0);
    }

    #[test]
    fn repeated_context_is_ambiguous() {
        // x b x c with x = ac
        let (boss, cc) = index(&["acgact"], 3);
        let report = reconstruct_all(&boss, &cc).unwrap();
        assert!(report.ambiguous_count >= 1);
        assert!(report.recovered.iter().all(|s| s.to_string() != "acgact"));
        assert!(report.foreign(&[dna("acgact")]).is_empty());
    }

    #[test]
    fn overlap_contig() {
        let (boss, cc) = index(&["tacgta", "cgtaac"], 4);
        let contig = contig_assm(&boss, &cc, node(&boss, "$ta"), 0.5).unwrap();
        assert_eq!(contig.to_string(), "tacgtaac");
        let all = assemble_all(&boss, &cc, 0.5, StartPolicy::All).unwrap();
        assert!(all.iter().any(|c| c.to_string() == "tacgtaac" || c.to_string() == "gttacgta"));
        let fast = assemble_all(&boss, &cc, 0.5, StartPolicy::SkipAbsorbed).unwrap();
        assert!(fast.iter().any(|c| c.to_string() == "tacgtaac" || c.to_string() == "gttacgta"));
    }

    #[test]
    fn contig_from_e1() {
        // the reverse complement joins the walk at acg and takes over at cgt
        let (boss, cc) = index(&["tacgt"], 4);
        assert_eq!(contig_assm(&boss, &cc, node(&boss, "$ta"), 0.5).unwrap().to_string(), "tacgta");
        assert_eq!(contig_assm(&boss, &cc, node(&boss, "$ta"), 1.0).unwrap().to_string(), "tacgt");
        assert_eq!(contig_assm(&boss, &cc, node(&boss, "$ac"), 0.5).unwrap().to_string(), "acgta");
    }

    #[test]
    fn threshold_and_start_checks() {
        let (boss, cc) = index(&["tacgt"], 4);
        let start = node(&boss, "$ta");
        assert!(matches!(contig_assm(&boss, &cc, start, 0.0), Err(Error::BadThreshold(_))));
        assert!(matches!(contig_assm(&boss, &cc, start, 1.5), Err(Error::BadThreshold(_))));
        assert!(matches!(contig_assm(&boss, &cc, node(&boss, "cgt"), 0.5), Err(Error::BadStart(_))));
        assert!(matches!(assemble_all(&boss, &cc, f64::NAN, StartPolicy::All), Err(Error::BadThreshold(_))));
    }
}
