//! DNA symbols, strings, and read sets.
//!
//! Symbols are ranked `$ < a < c < g < t` with codes `1..=5`. The dummy `$`
//! never appears in a read; the indexer adds it when padding.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// A symbol of the extended DNA alphabet.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(u8);

impl Symbol {
    pub const DUMMY: Symbol = Symbol(1);
    pub const A: Symbol = Symbol(2);
    pub const C: Symbol = Symbol(3);
    pub const G: Symbol = Symbol(4);
    pub const T: Symbol = Symbol(5);

    /// All symbols in rank order.
    pub const ALL: [Symbol; 5] = [Self::DUMMY, Self::A, Self::C, Self::G, Self::T];

    pub fn from_code(code: u8) -> Option<Symbol> {
        (1..=5).contains(&code).then_some(Symbol(code))
    }

    #[inline]
    pub fn code(self) -> u8 {
        self.0
    }

    /// Case-insensitive; accepts `$` as the dummy.
    pub fn from_ascii(byte: u8) -> Option<Symbol> {
        match byte {
            b'$' => Some(Self::DUMMY),
            b'a' | b'A' => Some(Self::A),
            b'c' | b'C' => Some(Self::C),
            b'g' | b'G' => Some(Self::G),
            b't' | b'T' => Some(Self::T),
            _ => None,
        }
    }

    pub fn to_ascii(self) -> u8 {
        b"?$acgt"[self.0 as usize]
    }

    #[inline]
    pub fn is_dummy(self) -> bool {
        self.0 == 1
    }

    /// Watson-Crick complement; `None` for the dummy.
    pub fn complement(self) -> Option<Symbol> {
        if self.is_dummy() {
            None
        } else {
            Some(Symbol(7 - self.0))
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ascii() as char)
    }
}

/// A string over `{$, a, c, g, t}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DnaString {
    symbols: Vec<Symbol>,
}

impl DnaString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        DnaString { symbols }
    }

    /// Parses an ASCII string, allowing the dummy symbol.
    pub fn from_ascii(text: &[u8]) -> Result<Self> {
        text.iter()
            .map(|&b| {
                Symbol::from_ascii(b).ok_or_else(|| {
                    Error::InvalidAlphabet(format!("byte {:?} is not in {{$,a,c,g,t}}", b as char))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn push(&mut self, s: Symbol) {
        self.symbols.push(s);
    }

    /// True when the string holds no dummy symbol.
    pub fn is_solid(&self) -> bool {
        !self.symbols.iter().any(|s| s.is_dummy())
    }

    pub fn reverse_complement(&self) -> Result<DnaString> {
        self.symbols
            .iter()
            .rev()
            .map(|s| {
                s.complement().ok_or_else(|| {
                    Error::InvalidAlphabet("cannot complement the dummy symbol".into())
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_symbols)
    }

    /// Removes every leading and trailing dummy.
    pub fn strip_dummies(&self) -> DnaString {
        let start = self.symbols.iter().position(|s| !s.is_dummy());
        match start {
            None => DnaString::new(),
            Some(start) => {
                let end = self.symbols.iter().rposition(|s| !s.is_dummy()).unwrap() + 1;
                DnaString::from_symbols(self.symbols[start..end].to_vec())
            }
        }
    }

    pub fn to_ascii(&self) -> Vec<u8> {
        self.symbols.iter().map(|s| s.to_ascii()).collect()
    }

    /// The lexicographically smaller of the string and its reverse complement.
    pub fn canonical(&self) -> Result<DnaString> {
        let rc = self.reverse_complement()?;
        Ok(if rc < *self { rc } else { self.clone() })
    }
}

impl fmt::Display for DnaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DnaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl std::str::FromStr for DnaString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DnaString::from_ascii(s.as_bytes())
    }
}

/// Why a raw read was not accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    NonAcgt,
    TooShort,
}

/// Accepts a read made only of `a/c/g/t` (any case), normalised to lowercase.
///
/// `min_len` is the order `k` when known; without it only empty reads are
/// rejected as too short.
pub fn validate_read(raw: &[u8], min_len: Option<usize>) -> std::result::Result<DnaString, Rejection> {
    let mut symbols = Vec::with_capacity(raw.len());
    for &b in raw {
        match Symbol::from_ascii(b) {
            Some(s) if !s.is_dummy() => symbols.push(s),
            _ => return Err(Rejection::NonAcgt),
        }
    }
    if symbols.is_empty() || symbols.len() < min_len.unwrap_or(1) {
        return Err(Rejection::TooShort);
    }
    Ok(DnaString::from_symbols(symbols))
}

/// Counters collected while ingesting reads.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub kept: usize,
    pub rejected_non_acgt: usize,
    pub rejected_short: usize,
    pub duplicates: usize,
}

impl IngestStats {
    pub fn rejected(&self) -> usize {
        self.rejected_non_acgt + self.rejected_short
    }
}

/// A deduplicated collection of solid reads.
///
/// Two reads are duplicates when they are equal or reverse complements of
/// each other, since both produce the same pair of strings in the doubled set.
#[derive(Clone, Debug, Default)]
pub struct ReadSet {
    reads: Vec<DnaString>,
    seen: HashSet<DnaString>,
    stats: IngestStats,
}

impl ReadSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validates and inserts a raw read. Returns whether it was kept.
    pub fn push_raw(&mut self, raw: &[u8], min_len: Option<usize>) -> bool {
        match validate_read(raw, min_len) {
            Ok(read) => self.push(read),
            Err(Rejection::NonAcgt) => {
                self.stats.rejected_non_acgt += 1;
                false
            }
            Err(Rejection::TooShort) => {
                self.stats.rejected_short += 1;
                false
            }
        }
    }

    /// Inserts an already validated solid read. Returns whether it was kept.
    pub fn push(&mut self, read: DnaString) -> bool {
        let canonical = match read.canonical() {
            Ok(c) => c,
            Err(_) => {
                self.stats.rejected_non_acgt += 1;
                return false;
            }
        };
        if !self.seen.insert(canonical) {
            self.stats.duplicates += 1;
            return false;
        }
        self.stats.kept += 1;
        self.reads.push(read);
        true
    }

    pub fn reads(&self) -> &[DnaString] {
        &self.reads
    }

    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    pub fn stats(&self) -> IngestStats {
        self.stats
    }

    /// Total number of symbols over all reads (one byte each in plain form).
    pub fn total_symbols(&self) -> usize {
        self.reads.iter().map(DnaString::len).sum()
    }

    /// The doubled set: each read followed by its reverse complement, with
    /// reverse-complement palindromes inserted once.
    pub fn with_rc(&self) -> Vec<DnaString> {
        let mut out = Vec::with_capacity(2 * self.reads.len());
        for read in &self.reads {
            let rc = read.reverse_complement().expect("reads are solid");
            let palindrome = rc == *read;
            out.push(read.clone());
            if !palindrome {
                out.push(rc);
            }
        }
        out
    }
}

impl FromIterator<DnaString> for ReadSet {
    fn from_iter<I: IntoIterator<Item = DnaString>>(iter: I) -> Self {
        let mut set = ReadSet::new();
        for r in iter {
            set.push(r);
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dna(s: &str) -> DnaString {
        s.parse().unwrap()
    }

    #[test]
    fn reverse_complement_examples() {
        assert_eq!(dna("acgt").reverse_complement().unwrap(), dna("acgt"));
        assert_eq!(dna("aaa").reverse_complement().unwrap(), dna("ttt"));
        assert_eq!(dna("gattaca").reverse_complement().unwrap(), dna("tgtaatc"));
    }

    #[test]
    fn reverse_complement_rejects_dummy() {
        assert!(matches!(dna("a$c").reverse_complement(), Err(Error::InvalidAlphabet(_))));
    }

    #[test]
    fn validate_examples() {
        assert_eq!(validate_read(b"ACGT", None).unwrap(), dna("acgt"));
        assert_eq!(validate_read(b"acgnt", None), Err(Rejection::NonAcgt));
        assert_eq!(validate_read(b"", None), Err(Rejection::TooShort));
        assert_eq!(validate_read(b"acg", Some(4)), Err(Rejection::TooShort));
        assert_eq!(validate_read(b"ac$g", None), Err(Rejection::NonAcgt));
    }

    #[test]
    fn symbol_order() {
        let ascii: Vec<u8> = Symbol::ALL.iter().map(|s| s.to_ascii()).collect();
        assert_eq!(ascii, b"$acgt");
        assert!(Symbol::ALL.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn doubled_set_layout() {
        let set: ReadSet = ["tacgt", "acgt", "ggaa"].iter().map(|s| dna(s)).collect();
        let doubled = set.with_rc();
        // acgt is its own reverse complement and appears once.
        assert_eq!(doubled, vec![dna("tacgt"), dna("acgta"), dna("acgt"), dna("ggaa"), dna("ttcc")]);
    }

    #[test]
    fn duplicates_and_rc_duplicates_are_dropped() {
        let mut set = ReadSet::new();
        assert!(set.push_raw(b"TACGT", None));
        assert!(!set.push_raw(b"tacgt", None));
        assert!(!set.push_raw(b"acgta", None));
        assert!(!set.push_raw(b"nnnn", None));
        assert_eq!(set.len(), 1);
        assert_eq!(set.stats(), IngestStats { kept: 1, rejected_non_acgt: 1, rejected_short: 0, duplicates: 2 });
    }

    #[test]
    fn strip_dummies_both_ends() {
        assert_eq!(dna("$$acg$").strip_dummies(), dna("acg"));
        assert_eq!(dna("$$$").strip_dummies(), dna(""));
    }

    proptest! {
        #[test]
        fn rc_is_an_involution(s in "[acgt]{0,64}") {
            let d = dna(&s);
            let rc = d.reverse_complement().unwrap();
            prop_assert_eq!(rc.len(), d.len());
            prop_assert_eq!(rc.reverse_complement().unwrap(), d);
        }
    }
}
