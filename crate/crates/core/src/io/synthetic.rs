//! Seeded synthetic data: a uniform random genome and error-free reads
//! sampled from both strands.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sequence::{DnaString, Symbol};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyntheticSpec {
    pub genome_len: usize,
    pub read_len: usize,
    pub coverage: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    /// Number of reads giving the requested coverage.
    pub fn read_count(&self) -> usize {
        (self.coverage * self.genome_len as f64 / self.read_len as f64).round() as usize
    }
}

#[derive(Clone, Debug)]
pub struct Synthetic {
    pub genome: DnaString,
    pub reads: Vec<DnaString>,
}

const BASES: [Symbol; 4] = [Symbol::A, Symbol::C, Symbol::G, Symbol::T];

pub fn generate(spec: &SyntheticSpec) -> Result<Synthetic> {
    if spec.read_len == 0 || spec.genome_len == 0 {
        return Err(Error::Usage("genome and read lengths must be positive".into()));
    }
    if spec.read_len > spec.genome_len {
        return Err(Error::Usage(format!("read length {} exceeds genome length {}", spec.read_len, spec.genome_len)));
    }
    if !(spec.coverage.is_finite() && spec.coverage >= 0.0) {
        return Err(Error::Usage(format!("invalid coverage {}", spec.coverage)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let genome: Vec<Symbol> = (0..spec.genome_len).map(|_| BASES[rng.gen_range(0..4)]).collect();
    let genome = DnaString::from_symbols(genome);
    let mut reads = Vec::with_capacity(spec.read_count());
    for _ in 0..spec.read_count() {
        let start = rng.gen_range(0..=spec.genome_len - spec.read_len);
        let read = DnaString::from_symbols(genome.symbols()[start..start + spec.read_len].to_vec());
        reads.push(if rng.gen_bool(0.5) { read.reverse_complement()? } else { read });
    }
    Ok(Synthetic { genome, reads })
}

/// Writes sequences as FASTA records named `{prefix}{i}`.
pub fn write_fasta<W: Write>(out: &mut W, prefix: &str, seqs: &[DnaString]) -> io::Result<()> {
    for (i, s) in seqs.iter().enumerate() {
        writeln!(out, ">{prefix}{}", i + 1)?;
        out.write_all(&s.to_ascii())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(seed: u64) -> SyntheticSpec {
        SyntheticSpec { genome_len: 2000, read_len: 100, coverage: 5.0, seed }
    }

    #[test]
    fn counts_and_lengths() {
        let s = SyntheticSpec { genome_len: 100_000, read_len: 100, coverage: 20.0, seed: 1 };
        assert_eq!(s.read_count(), 20_000);
        let data = generate(&spec(3)).unwrap();
        assert_eq!(data.reads.len(), 100);
        assert!(data.reads.iter().all(|r| r.len() == 100));
        let g = data.genome.to_string();
        let rc = data.genome.reverse_complement().unwrap().to_string();
        assert!(data.reads.iter().all(|r| g.contains(&r.to_string()) || rc.contains(&r.to_string())));
    }

    #[test]
    fn seeded() {
        let a = generate(&spec(7)).unwrap();
        let b = generate(&spec(7)).unwrap();
        assert_eq!(a.reads, b.reads);
        assert_ne!(generate(&spec(8)).unwrap().genome, a.genome);
    }

    #[test]
    fn read_longer_than_genome() {
        let bad = SyntheticSpec { genome_len: 50, read_len: 100, coverage: 1.0, seed: 0 };
        assert!(matches!(generate(&bad), Err(Error::Usage(_))));
    }
}
