//! `delsub`: ball enumeration, intersection sizes, verification sweeps and
//! reconstruction experiments for the single-deletion single-substitution
//! channel.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use delsub::ball::BallSpec;
use delsub::intersect::{theorem_bound, validity_threshold};
use delsub::recon::{self, Codebook, CoverageOptions, ReadSet};
use delsub::sweep::{run_sweep, Mode, Scope};
use delsub::{intersection_size_fast, Alphabet, Error, IntersectionReport, Oracle, Sequence};

use output::{Format, Render};

#[derive(Parser)]
#[command(name = "delsub", version, about = "Single-deletion single-substitution ball toolkit")]
struct Cli {
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Largest ball the enumerating oracle may materialize.
    #[arg(long, global = true, default_value_t = delsub::ball::DEFAULT_BUDGET)]
    budget: u64,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Suppress progress lines on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate B^{D,S}_{t,s}(x).
    Ball {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
    },
    /// Size of the intersection of the (1,1)-balls of two words.
    Intersect {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, value_enum, default_value_t = IntersectMode::Fast)]
        mode: IntersectMode,
    },
    /// Check a property over all pairs of a domain or over seeded samples.
    Verify {
        #[arg(long, value_enum)]
        scope: ScopeArg,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        domain: Domain,
    },
    /// Monte-Carlo transmit and decode, one row per read count.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        /// Distinct read counts, comma separated (default: the guaranteed count).
        #[arg(long, value_delimiter = ',')]
        reads: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Probability that a read also carries a substitution.
        #[arg(long, default_value_t = 0.5)]
        p_sub: f64,
    },
    /// Largest intersection over distinct codeword pairs.
    Coverage {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = recon::DEFAULT_COVERAGE_PAIR_CAP)]
        pair_cap: u64,
        /// Pairs to sample when the code is too large for the cap (0: fail instead).
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decode a set of reads against a codebook.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// File with one read per line.
        #[arg(long, conflicts_with = "read")]
        reads_file: Option<PathBuf>,
        /// A read; may be repeated.
        #[arg(long)]
        read: Vec<String>,
    },
    /// Distinct reads that guarantee unique reconstruction at (q, n).
    RequiredReads {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum IntersectMode {
    Fast,
    Oracle,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Oracle,
    Claims,
    Theorem,
    Lemmas,
    Remark5,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Scope {
        match s {
            ScopeArg::Oracle => Scope::Oracle,
            ScopeArg::Claims => Scope::Claims,
            ScopeArg::Theorem => Scope::Theorem,
            ScopeArg::Lemmas => Scope::Lemmas,
            ScopeArg::Remark5 => Scope::Remark5,
        }
    }
}

#[derive(Args)]
struct Domain {
    /// Visit every ordered pair.
    #[arg(long, conflicts_with_all = ["samples", "seed"])]
    exhaustive: bool,
    /// Number of seeded random pairs.
    #[arg(long, requires = "seed")]
    samples: Option<usize>,
    #[arg(long, requires = "samples")]
    seed: Option<u64>,
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long)]
    q: u32,
    /// `parity`, or a file with one codeword per line.
    #[arg(long, default_value = "parity")]
    codebook: String,
    /// Code length; required for `parity`.
    #[arg(long)]
    n: Option<usize>,
}

impl CodeArgs {
    fn load(&self) -> Result<Codebook, Failure> {
        let alphabet = Alphabet::new(self.q)?;
        let code = if self.codebook == "parity" {
            let n = self.n.ok_or_else(|| Failure::Usage("--n is required with --codebook parity".into()))?;
            Codebook::parity(alphabet, n)?
        } else {
            Codebook::from_file(self.codebook.as_ref(), alphabet)?
        };
        if let Some(n) = self.n {
            if n != code.n() {
                return Err(Error::LengthMismatch { left: n, right: code.n() }.into());
            }
        }
        Ok(code)
    }
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

#[derive(Serialize)]
struct ErrorOutput<'a> {
    error: &'a str,
    message: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            let (kind, message) = match &f {
                Failure::Usage(m) => ("usage", m.clone()),
                Failure::Core(e) => (e.kind(), e.to_string()),
            };
            match cli.format {
                Format::Json => eprintln!(
                    "{}",
                    serde_json::to_string(&ErrorOutput { error: kind, message }).expect("error serializes")
                ),
                _ => eprintln!("error: {message}"),
            }
            ExitCode::from(2)
        }
    }
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn progress(label: &'static str, quiet: bool) -> impl Fn(usize, usize) + Sync {
    let last = std::sync::atomic::AtomicUsize::new(usize::MAX);
    move |done, total| {
        if quiet || total == 0 {
            return;
        }
        let step = done * 10 / total;
        if last.swap(step, std::sync::atomic::Ordering::Relaxed) != step {
            eprintln!("{label}: {}% ({done}/{total})", step * 10);
        }
    }
}

#[derive(Serialize)]
struct BallOutput {
    q: u16,
    x: Sequence,
    t: usize,
    s: usize,
    size: usize,
    words: Vec<Sequence>,
}

#[derive(Serialize)]
struct IntersectOutput {
    x: Sequence,
    y: Sequence,
    mode: &'static str,
    size: usize,
    fast: Option<IntersectionReport>,
    oracle_size: Option<usize>,
    agree: Option<bool>,
}

#[derive(Serialize)]
struct RequiredReadsOutput {
    q: u16,
    n: usize,
    threshold: usize,
    max_intersection: i64,
    required_reads: u64,
}

#[derive(Serialize)]
struct CoverageOutput {
    q: u16,
    n: usize,
    codebook_size: String,
    #[serde(flatten)]
    report: recon::CoverageReport,
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let fmt = cli.format;
    let oracle = Oracle::with_budget(cli.budget);
    match &cli.command {
        Command::Ball { q, x, t, s } => {
            let alphabet = Alphabet::new(*q)?;
            let x = Sequence::parse(x, alphabet)?;
            let ball = oracle.ds_ball(&x, BallSpec::new(*t, *s))?;
            let out = BallOutput {
                q: alphabet.q(),
                size: ball.len(),
                words: ball.into_iter().collect(),
                x,
                t: *t,
                s: *s,
            };
            out.emit(fmt);
            Ok(ExitCode::SUCCESS)
        }
        Command::Intersect { q, x, y, mode } => {
            let alphabet = Alphabet::new(*q)?;
            let x = Sequence::parse(x, alphabet)?;
            let y = Sequence::parse(y, alphabet)?;
            let spec = BallSpec::SINGLE_DELETION_SINGLE_SUBSTITUTION;
            let (fast, oracle_size) = match mode {
                IntersectMode::Fast => (Some(intersection_size_fast(&x, &y)?), None),
                IntersectMode::Oracle => (None, Some(oracle.ball_intersection_size(&x, &y, spec)?)),
                IntersectMode::Both => (
                    Some(intersection_size_fast(&x, &y)?),
                    Some(oracle.ball_intersection_size(&x, &y, spec)?),
                ),
            };
            let agree = match (&fast, oracle_size) {
                (Some(r), Some(o)) => Some(r.size == o),
                _ => None,
            };
            let out = IntersectOutput {
                size: fast.as_ref().map(|r| r.size).or(oracle_size).unwrap_or(0),
                mode: match mode {
                    IntersectMode::Fast => "fast",
                    IntersectMode::Oracle => "oracle",
                    IntersectMode::Both => "both",
                },
                x,
                y,
                fast,
                oracle_size,
                agree,
            };
            out.emit(fmt);
            Ok(exit(agree != Some(false)))
        }
        Command::Verify { scope, q, n, domain } => {
            let alphabet = Alphabet::new(*q)?;
            let mode = match (domain.exhaustive, domain.samples, domain.seed) {
                (true, _, _) => Mode::Exhaustive,
                (false, Some(samples), Some(seed)) => Mode::Sampled { samples, seed },
                _ => return Err(Failure::Usage("give --exhaustive, or --samples with --seed".into())),
            };
            let summary = run_sweep((*scope).into(), alphabet, *n, mode, &progress("verify", cli.quiet))?;
            summary.emit(fmt);
            Ok(exit(summary.passed()))
        }
        Command::Simulate {
            code,
            reads,
            trials,
            seed,
            p_sub,
        } => {
            let codebook = code.load()?;
            let reads = if reads.is_empty() {
                vec![recon::required_reads(codebook.n(), codebook.alphabet().q())? as usize]
            } else {
                reads.clone()
            };
            let mut rows = Vec::new();
            let report = progress("simulate", cli.quiet);
            for (k, &r) in reads.iter().enumerate() {
                let table = recon::simulate(&codebook, &[r], *trials, *seed, *p_sub)?;
                rows.extend(table.rows);
                report(k + 1, reads.len());
            }
            let table = recon::SimulationTable {
                n: codebook.n(),
                q: codebook.alphabet().q(),
                seed: *seed,
                p_sub: *p_sub,
                rows,
            };
            table.emit(fmt);
            Ok(ExitCode::SUCCESS)
        }
        Command::Coverage {
            code,
            pair_cap,
            samples,
            seed,
        } => {
            let codebook = code.load()?;
            if *samples > 0 && seed.is_none() {
                return Err(Failure::Usage("--samples needs --seed".into()));
            }
            let opts = CoverageOptions {
                pair_cap: *pair_cap,
                samples: *samples,
                seed: seed.unwrap_or(0),
            };
            let report = recon::read_coverage_with(&codebook, opts)?;
            let out = CoverageOutput {
                q: codebook.alphabet().q(),
                n: codebook.n(),
                codebook_size: codebook.len().to_string(),
                report,
            };
            out.emit(fmt);
            Ok(ExitCode::SUCCESS)
        }
        Command::Decode {
            code,
            reads_file,
            read,
        } => {
            let codebook = code.load()?;
            let alphabet = codebook.alphabet();
            let reads = match reads_file {
                Some(path) => ReadSet::from_file(path, alphabet)?,
                None => ReadSet::new(
                    read.iter()
                        .map(|r| Sequence::parse(r, alphabet))
                        .collect::<Result<_, _>>()?,
                )?,
            };
            let result = recon::reconstruct(&reads, &codebook)?;
            result.emit(fmt);
            Ok(ExitCode::SUCCESS)
        }
        Command::RequiredReads { q, n } => {
            let alphabet = Alphabet::new(*q)?;
            let required = recon::required_reads(*n, alphabet.q())?;
            let out = RequiredReadsOutput {
                q: alphabet.q(),
                n: *n,
                threshold: validity_threshold(alphabet.q()),
                max_intersection: theorem_bound(*n, alphabet.q()),
                required_reads: required,
            };
            out.emit(fmt);
            Ok(ExitCode::SUCCESS)
        }
    }
}
