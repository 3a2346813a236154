//! Test support: a naive de Bruijn graph over plain strings, random read
//! sets, and path predicates.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cdbg::coloring::read_path;
use cdbg::{BossIndex, CompressedColors, DnaString, NodeId, ReadSet, Symbol};

pub fn rc(s: &str) -> String {
    s.bytes()
        .rev()
        .map(|b| match b {
            b'a' => 't',
            b'c' => 'g',
            b'g' => 'c',
            b't' => 'a',
            _ => panic!("not a base: {}", b as char),
        })
        .collect()
}

/// Hash-map de Bruijn graph with dummy padding, built straight from the
/// definition. Node ids are 1-based positions in colexicographic order.
pub struct NaiveDbg {
    pub k: usize,
    pub labels: Vec<String>,
    pub ids: HashMap<String, usize>,
    /// Outgoing `(symbol, target)` per node, by symbol; terminal edges have
    /// no target.
    pub out: Vec<Vec<(u8, Option<usize>)>>,
    pub preds: Vec<Vec<usize>>,
}

impl NaiveDbg {
    pub fn new(reads: &[String], k: usize) -> Self {
        let mut strings: BTreeSet<String> = BTreeSet::new();
        for r in reads {
            if r.len() >= k {
                strings.insert(r.clone());
                strings.insert(rc(r));
            }
        }
        let mut edges: BTreeSet<(String, u8)> = BTreeSet::new();
        for s in &strings {
            let padded = format!("{}{}$", "$".repeat(k - 1), s);
            let bytes = padded.as_bytes();
            for w in bytes.windows(k) {
                edges.insert((String::from_utf8(w[..k - 1].to_vec()).unwrap(), w[k - 1]));
            }
            let tail = String::from_utf8(bytes[bytes.len() - (k - 1)..].to_vec()).unwrap();
            edges.insert((tail, b'$'));
        }
        let is_ending = |l: &str| l.ends_with('$') && !l.starts_with('$');
        let target = |l: &str, c: u8| -> Option<String> {
            if is_ending(l) {
                None
            } else {
                Some(format!("{}{}", &l[1..], c as char))
            }
        };
        let mut nodes: BTreeSet<String> = BTreeSet::new();
        for (l, c) in &edges {
            nodes.insert(l.clone());
            if let Some(t) = target(l, *c) {
                nodes.insert(t);
            }
        }
        // '$' sorts below the bases in ASCII, so byte order of the reversed
        // labels is the BOSS order
        let mut labels: Vec<String> = nodes.into_iter().collect();
        labels.sort_by_key(|l| l.bytes().rev().collect::<Vec<u8>>());
        let ids: HashMap<String, usize> = labels.iter().enumerate().map(|(i, l)| (l.clone(), i + 1)).collect();
        let n = labels.len();
        let mut out = vec![Vec::new(); n + 1];
        let mut preds = vec![Vec::new(); n + 1];
        for (l, c) in &edges {
            let from = ids[l];
            let to = target(l, *c).map(|t| ids[&t]);
            out[from].push((*c, to));
            if let Some(t) = to {
                preds[t].push(from);
            }
        }
        for o in &mut out {
            o.sort();
        }
        for p in &mut preds {
            p.sort();
        }
        NaiveDbg { k, labels, ids, out, preds }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id - 1]
    }

    pub fn is_starting(&self, id: usize) -> bool {
        let l = self.label(id);
        l.starts_with('$') && !l[1..].contains('$')
    }

    pub fn is_ending(&self, id: usize) -> bool {
        let l = self.label(id);
        l.ends_with('$') && !l[..l.len() - 1].contains('$')
    }

    pub fn is_solid(&self, id: usize) -> bool {
        !self.label(id).contains('$')
    }

    pub fn is_critical(&self, id: usize) -> bool {
        self.is_solid(id) && self.preds[id].iter().any(|&p| self.out[p].len() > 1)
    }

    pub fn forward(&self, id: usize, c: u8) -> Option<usize> {
        self.out[id].iter().find(|(s, _)| *s == c).and_then(|(_, t)| *t)
    }
}

fn sym_byte(s: Symbol) -> u8 {
    s.to_ascii()
}

/// Compares every navigation and taxonomy answer of `boss` with `oracle`.
/// Returns the first disagreement.
pub fn compare_with_oracle(boss: &BossIndex, oracle: &NaiveDbg) -> Result<(), String> {
    let n = oracle.node_count();
    if boss.node_count() != n {
        return Err(format!("node count {} vs {}", boss.node_count(), n));
    }
    if boss.edge_count() != oracle.edge_count() {
        return Err(format!("edge count {} vs {}", boss.edge_count(), oracle.edge_count()));
    }
    let id = |v: NodeId| v.get();
    for i in 1..=n {
        let v = NodeId::new(i);
        let label = boss.node_label(v).map_err(|e| e.to_string())?.to_string();
        let want = oracle.label(i);
        if label != want {
            return Err(format!("label of {i}: {label} vs {want}"));
        }
        let back = boss.label_to_node(&want.parse::<DnaString>().unwrap()).map_err(|e| e.to_string())?;
        if back != Some(v) {
            return Err(format!("label_to_node({want}) = {back:?}"));
        }
        let out = &oracle.out[i];
        if boss.outdegree(v).unwrap() != out.len() {
            return Err(format!("outdegree of {want}"));
        }
        for s in Symbol::ALL {
            let got = boss.forward(v, s).unwrap().map(id);
            if got != oracle.forward(i, sym_byte(s)) {
                return Err(format!("forward({want}, {s:?}) = {got:?}"));
            }
        }
        for (r, &(c, t)) in out.iter().enumerate() {
            if boss.forward_r(v, r + 1).unwrap().map(id) != t || sym_byte(boss.edge_symbol(v, r + 1).unwrap()) != c {
                return Err(format!("edge {} of {want}", r + 1));
            }
        }
        if boss.forward_r(v, out.len() + 1).is_ok() {
            return Err(format!("forward_r past the last edge of {want}"));
        }
        let preds: Vec<usize> = boss.backward(v).unwrap().into_iter().map(id).collect();
        if preds != oracle.preds[i] || boss.indegree(v).unwrap() != preds.len() {
            return Err(format!("predecessors of {want}: {preds:?} vs {:?}", oracle.preds[i]));
        }
        for (j, &p) in preds.iter().enumerate() {
            if boss.backward_r(v, j + 1).unwrap().get() != p {
                return Err(format!("backward_r({want}, {})", j + 1));
            }
        }
        let taxonomy = [
            (boss.is_starting(v).unwrap(), oracle.is_starting(i), "starting"),
            (boss.is_ending(v).unwrap(), oracle.is_ending(i), "ending"),
            (boss.is_solid(v).unwrap(), oracle.is_solid(i), "solid"),
            (boss.is_critical(v).unwrap(), oracle.is_critical(i), "critical"),
        ];
        for (got, want_t, what) in taxonomy {
            if got != want_t {
                return Err(format!("{what}({want}) = {got}"));
            }
        }
        if i > 1 {
            let prev: Vec<u8> = oracle.label(i - 1).bytes().rev().collect();
            let cur: Vec<u8> = want.bytes().rev().collect();
            if prev >= cur {
                return Err(format!("labels {i} and {} out of order", i - 1));
            }
        }
    }
    if boss.node(n + 1).is_ok() || boss.outdegree(NodeId::new(n + 1)).is_ok() {
        return Err("node past the end accepted".into());
    }
    Ok(())
}

/// A seeded random read set of the kind used by the oracle checks: up to
/// 50 reads of length 20 to 60. Some sets sample a short genome so reads
/// overlap, some use a two-letter alphabet to force repeats.
pub fn random_read_set(seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=50);
    let alphabet: &[u8] = match seed % 3 {
        2 => b"ac",
        _ => b"acgt",
    };
    let genome: Vec<u8> = (0..rng.gen_range(80..300)).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
    (0..n)
        .map(|_| {
            let len = rng.gen_range(20..=60);
            if seed % 3 == 1 {
                (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())] as char).collect()
            } else {
                let start = rng.gen_range(0..=genome.len() - len);
                String::from_utf8(genome[start..start + len].to_vec()).unwrap()
            }
        })
        .collect()
}

pub fn read_set(reads: &[String]) -> ReadSet {
    reads.iter().map(|r| r.parse::<DnaString>().unwrap()).collect()
}

/// Whether `path` is a path (no repeated node) on which no two colored
/// nodes share a predecessor that is itself on the path.
pub fn is_unambiguous(boss: &BossIndex, colors: &CompressedColors, path: &[NodeId]) -> bool {
    let on_path: BTreeSet<NodeId> = path.iter().copied().collect();
    if on_path.len() != path.len() {
        return false;
    }
    path.iter().all(|&v| {
        let succ = boss.successors(v).unwrap();
        succ.iter().filter(|(_, u)| on_path.contains(u) && colors.is_colored(*u)).count() <= 1
    })
}

/// Whether every branching node of `path` has exactly one successor
/// carrying `color`.
pub fn is_safe(boss: &BossIndex, colors: &CompressedColors, path: &[NodeId], color: u32) -> bool {
    path.iter().all(|&v| {
        let succ = boss.successors(v).unwrap();
        succ.len() <= 1 || succ.iter().filter(|(_, u)| colors.has_color(*u, color)).count() == 1
    })
}

/// Checks the safety property for every unambiguous string. Returns the
/// number of strings checked, or the first unsafe one.
pub fn check_safety(boss: &BossIndex, colors: &CompressedColors, strings: &[DnaString], assigned: &[u32]) -> Result<usize, String> {
    let mut checked = 0;
    for (s, &c) in strings.iter().zip(assigned) {
        let path = read_path(boss, s).map_err(|e| e.to_string())?;
        if !is_unambiguous(boss, colors, &path) {
            continue;
        }
        if !is_safe(boss, colors, &path, c) {
            return Err(format!("string {s} with color {c} has an unsafe path"));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Colors each string with a color chosen by the caller instead of the
/// greedy rule, writing it on the colorable nodes of its path.
pub fn fixed_coloring(boss: &BossIndex, strings: &[DnaString], colors: &[u32]) -> CompressedColors {
    use cdbg::coloring::{mark_colorable, scan_read, DynamicColorTable};
    let map = mark_colorable(boss).unwrap();
    let mut rows = vec![Vec::new(); map.count()];
    for (s, &c) in strings.iter().zip(colors) {
        for r in scan_read(boss, &map, s).unwrap().w {
            let row: &mut Vec<u32> = &mut rows[r - 1];
            if let Err(at) = row.binary_search(&c) {
                row.insert(at, c);
            }
        }
    }
    CompressedColors::compress(&DynamicColorTable::from_rows(rows), &map).unwrap()
}
