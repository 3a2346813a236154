use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use cdbg::io::container;
use cdbg::io::synthetic::{self, SyntheticSpec};
use cdbg::io::read_reads_path;
use cdbg::traversal::{assemble_all, reconstruct_all, StartPolicy};
use cdbg::{ColoredIndex, Error, Result, StatsRecord};

#[derive(Parser)]
#[command(name = "cdbg", version, about = "Colored de Bruijn graph index of sequencing reads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Index a FASTA/FASTQ file.
    Build(BuildArgs),
    /// Rebuild the unambiguous reads from an index.
    Reconstruct(ReconstructArgs),
    /// Assemble contigs from an index.
    Assemble(AssembleArgs),
    /// Print size and coloring figures of an index.
    Stats(StatsArgs),
    /// Write random reads sampled from a random genome.
    GenSynthetic(SyntheticArgs),
}

#[derive(Args)]
struct Threads {
    /// Worker threads [default: logical cores]
    #[arg(long)]
    threads: Option<usize>,
}

impl Threads {
    fn get(&self) -> usize {
        self.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1)
    }
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(short, long, default_value_t = 25)]
    k: usize,
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    threads: Threads,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long)]
    index: PathBuf,
    /// Output file, one sequence per line [default: stdout]
    #[arg(long)]
    output: Option<PathBuf>,
    /// Check the output against these reads
    #[arg(long)]
    verify: Option<PathBuf>,
    #[command(flatten)]
    threads: Threads,
}

#[derive(Args)]
struct AssembleArgs {
    #[arg(long)]
    index: PathBuf,
    /// Share of the active colors a successor needs to be followed
    #[arg(long, default_value_t = 0.5)]
    min_frac: f64,
    /// FASTA output [default: stdout]
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also walk from starting nodes whose reads already joined a contig
    #[arg(long)]
    all_starts: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    index: PathBuf,
}

#[derive(Args)]
struct SyntheticArgs {
    #[arg(long, default_value_t = 100_000)]
    genome_len: usize,
    #[arg(long, default_value_t = 100)]
    read_len: usize,
    #[arg(long, default_value_t = 20.0)]
    coverage: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// FASTA output [default: stdout]
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the genome as FASTA
    #[arg(long)]
    genome_output: Option<PathBuf>,
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn thread_pool(threads: usize) -> Result<()> {
    // fails only when a pool already exists, which is fine
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn build(args: BuildArgs) -> Result<()> {
    if !args.input.exists() {
        return Err(Error::Usage(format!("input file {} does not exist", args.input.display())));
    }
    let threads = args.threads.get();
    thread_pool(threads)?;
    let reads = read_reads_path(&args.input, Some(args.k))?;
    let st = reads.stats();
    info!("kept {} reads, rejected {} (non-ACGT {}, short {}), {} duplicates", st.kept, st.rejected(), st.rejected_non_acgt, st.rejected_short, st.duplicates);
    let index = ColoredIndex::build(&reads, args.k, threads)?;
    let bytes = container::save(&index, &args.output)?;
    let report = reconstruct_all(&index.boss, &index.colors)?;
    print!("{}", StatsRecord::new(&index, bytes, Some(report.ambiguous_count)).table());
    Ok(())
}

fn reconstruct(args: ReconstructArgs) -> Result<()> {
    thread_pool(args.threads.get())?;
    let (index, _) = container::load(&args.index)?;
    let report = reconstruct_all(&index.boss, &index.colors)?;
    let mut out = open_output(args.output.as_deref())?;
    for s in &report.recovered {
        out.write_all(&s.to_ascii())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    drop(out);
    eprintln!("recovered={}", report.recovered.len());
    eprintln!("ambiguous_count={}", report.ambiguous_count);
    if let Some(path) = args.verify {
        let original = read_reads_path(&path, None)?;
        let fraction = report.recovered_fraction(original.reads());
        let foreign = report.foreign(original.reads()).len();
        eprintln!("verified_reads={}", original.len());
        eprintln!("recovered_percent={:.3}", 100.0 * fraction);
        eprintln!("foreign={foreign}");
        if foreign > 0 {
            return Err(Error::Integrity(format!("{foreign} reconstructed sequences are not in the original reads")));
        }
    }
    Ok(())
}

fn assemble(args: AssembleArgs) -> Result<()> {
    if !(args.min_frac > 0.0 && args.min_frac <= 1.0) {
        return Err(Error::BadThreshold(args.min_frac));
    }
    let (index, _) = container::load(&args.index)?;
    let policy = if args.all_starts { StartPolicy::All } else { StartPolicy::SkipAbsorbed };
    let contigs = assemble_all(&index.boss, &index.colors, args.min_frac, policy)?;
    let mut out = open_output(args.output.as_deref())?;
    synthetic::write_fasta(&mut out, "contig", &contigs)?;
    out.flush()?;
    Ok(())
}

fn stats(args: StatsArgs) -> Result<()> {
    let (index, bytes) = container::load(&args.index)?;
    let report = reconstruct_all(&index.boss, &index.colors)?;
    let record = StatsRecord::new(&index, bytes, Some(report.ambiguous_count));
    print!("{}", record.table());
    println!();
    print!("{record}");
    Ok(())
}

fn gen_synthetic(args: SyntheticArgs) -> Result<()> {
    let spec = SyntheticSpec { genome_len: args.genome_len, read_len: args.read_len, coverage: args.coverage, seed: args.seed };
    let data = synthetic::generate(&spec)?;
    let mut out = open_output(args.output.as_deref())?;
    synthetic::write_fasta(&mut out, "read", &data.reads)?;
    out.flush()?;
    if let Some(path) = args.genome_output {
        let mut g = BufWriter::new(File::create(path)?);
        synthetic::write_fasta(&mut g, "genome", &[data.genome])?;
        g.flush()?;
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Usage(_) | Error::BadOrder(_) | Error::BadThreshold(_) => 1,
        Error::Integrity(_) | Error::CorruptIndex(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Build(a) => build(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Assemble(a) => assemble(a),
        Command::Stats(a) => stats(a),
        Command::GenSynthetic(a) => gen_synthetic(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
