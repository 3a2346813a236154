//! Streaming FASTA/FASTQ reader. Identifiers and qualities are dropped;
//! each sequence goes through read validation into a [`ReadSet`].

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sequence::ReadSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Fasta,
    Fastq,
}

struct Lines<R> {
    inner: R,
    line: usize,
    buf: Vec<u8>,
}

impl<R: BufRead> Lines<R> {
    fn new(inner: R) -> Self {
        Lines { inner, line: 0, buf: Vec::new() }
    }

    /// Next line without its terminator, or `None` at end of input.
    fn next(&mut self) -> Result<Option<&[u8]>> {
        self.buf.clear();
        if self.inner.read_until(b'\n', &mut self.buf)? == 0 {
            return Ok(None);
        }
        self.line += 1;
        while matches!(self.buf.last(), Some(b'\n' | b'\r')) {
            self.buf.pop();
        }
        Ok(Some(&self.buf))
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, msg: msg.into() }
    }
}

/// Parses reads, picking the format from the first byte (`>` or `@`).
/// Reads shorter than `min_len` are counted as rejected.
pub fn parse_reads<R: BufRead>(mut input: R, min_len: Option<usize>) -> Result<ReadSet> {
    let first = loop {
        let buf = input.fill_buf()?;
        match buf.iter().position(|b| !b.is_ascii_whitespace()) {
            Some(i) => break Some(buf[i]),
            None if buf.is_empty() => break None,
            None => {
                let n = buf.len();
                input.consume(n);
            }
        }
    };
    match first {
        None => Ok(ReadSet::new()),
        Some(b'>') => parse_reads_as(input, Format::Fasta, min_len),
        Some(b'@') => parse_reads_as(input, Format::Fastq, min_len),
        Some(b) => Err(Error::Parse { line: 1, msg: format!("expected '>' or '@', found {:?}", b as char) }),
    }
}

pub fn parse_reads_as<R: BufRead>(input: R, format: Format, min_len: Option<usize>) -> Result<ReadSet> {
    let mut lines = Lines::new(input);
    let mut reads = ReadSet::new();
    match format {
        Format::Fasta => parse_fasta(&mut lines, &mut reads, min_len)?,
        Format::Fastq => parse_fastq(&mut lines, &mut reads, min_len)?,
    }
    Ok(reads)
}

fn parse_fasta<R: BufRead>(lines: &mut Lines<R>, reads: &mut ReadSet, min_len: Option<usize>) -> Result<()> {
    let mut seq: Option<Vec<u8>> = None;
    while let Some(line) = lines.next()? {
        if line.first() == Some(&b'>') {
            if let Some(s) = seq.take() {
                reads.push_raw(&s, min_len);
            }
            seq = Some(Vec::new());
        } else if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        } else {
            match seq.as_mut() {
                Some(s) => s.extend_from_slice(line),
                None => return Err(lines.error("sequence data before the first '>' header")),
            }
        }
    }
    if let Some(s) = seq {
        reads.push_raw(&s, min_len);
    }
    Ok(())
}

fn parse_fastq<R: BufRead>(lines: &mut Lines<R>, reads: &mut ReadSet, min_len: Option<usize>) -> Result<()> {
    loop {
        let header_ok = match lines.next()? {
            None => return Ok(()),
            Some(l) if l.iter().all(u8::is_ascii_whitespace) => continue,
            Some(l) => l.first() == Some(&b'@'),
        };
        if !header_ok {
            return Err(lines.error("expected '@' at the start of a FASTQ record"));
        }
        let seq = match lines.next()? {
            Some(l) => l.to_vec(),
            None => return Err(lines.error("record ends after its header")),
        };
        match lines.next()? {
            Some(l) if l.first() == Some(&b'+') => {}
            Some(_) => return Err(lines.error("expected '+' separator line")),
            None => return Err(lines.error("record ends before its '+' line")),
        }
        let qual_len = match lines.next()? {
            Some(l) => l.len(),
            None => return Err(lines.error("record ends before its quality line")),
        };
        if qual_len != seq.len() {
            return Err(lines.error(format!("quality length {qual_len} differs from sequence length {}", seq.len())));
        }
        reads.push_raw(&seq, min_len);
    }
}

pub fn read_reads_path(path: &Path, min_len: Option<usize>) -> Result<ReadSet> {
    let file = File::open(path)?;
    parse_reads(BufReader::new(file), min_len)
}
