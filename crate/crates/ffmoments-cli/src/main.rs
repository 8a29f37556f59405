use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use ffmoments_cli::{cmd_report, cmd_sweep, parse_complex, selftest, ReportKind, RunConfig};

/// Exact quadratic Dirichlet L-functions over F_q[x] and numerical checks of
/// their conjectured moment, ratio and one-level-density formulas.
#[derive(Parser)]
#[command(name = "ffmoments", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute L-polynomials, central values and zeros for an ensemble slice
    /// and persist them as a CSV cache.
    Sweep(CommonArgs),
    /// Emit a machine-readable comparison report.
    Report {
        /// moments | ratios | density | conjecture | selftest
        kind: String,
        #[command(flatten)]
        args: CommonArgs,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Odd prime field order.
    #[arg(long, default_value_t = 3)]
    q: u32,
    /// Genus (discriminants have degree 2g + 1).
    #[arg(long, default_value_t = 1)]
    g: usize,
    /// Moment order.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Euler-product truncation degree N.
    #[arg(long, default_value_t = 30)]
    cutoff: usize,
    /// Contour nodes per circle M.
    #[arg(long, default_value_t = 64)]
    nodes: usize,
    /// Sample this many discriminants (with replacement) instead of
    /// enumerating the full ensemble.
    #[arg(long)]
    sample: Option<u64>,
    /// RNG seed; all randomness flows from this flag.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores); output never depends on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Output file (cache CSV for sweep, JSON for reports); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cache file produced by `sweep`, required by empirical report kinds.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Build each L-polynomial by both algorithms and require exact equality.
    #[arg(long, default_value_t = false)]
    cross_check: bool,
    /// Numerator shifts, e.g. --alpha 0.1 --alpha 0.1+0.05i
    #[arg(long)]
    alpha: Vec<String>,
    /// Denominator shifts.
    #[arg(long)]
    gamma: Vec<String>,
    /// Real shift for the log-derivative comparison.
    #[arg(long, default_value_t = 0.1)]
    r: f64,
    /// Test function spec: fejer:SIGMA | trig:c0,c1,... | indicator:A,EPS
    #[arg(long, default_value = "fejer:1.0")]
    test: String,
}

impl CommonArgs {
    fn into_config(self) -> Result<RunConfig> {
        Ok(RunConfig {
            q: self.q,
            g: self.g,
            k: self.k,
            cutoff: self.cutoff,
            nodes: self.nodes,
            sample: self.sample,
            seed: self.seed,
            threads: self.threads,
            out: self.out,
            cache: self.cache,
            cross_check: self.cross_check,
            alpha: self
                .alpha
                .iter()
                .map(|s| parse_complex(s))
                .collect::<Result<_>>()?,
            gamma: self
                .gamma
                .iter()
                .map(|s| parse_complex(s))
                .collect::<Result<_>>()?,
            r: self.r,
            test: self.test,
        })
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep(args) => {
            let cfg = args.into_config()?;
            if let Some(t) = cfg.threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global()?;
            }
            let cache = cmd_sweep(&cfg)?;
            if cfg.out.is_none() {
                emit(&None, &cache.to_csv())?;
            } else {
                eprintln!(
                    "wrote {} records to {}",
                    cache.records.len(),
                    cfg.out.as_ref().unwrap().display()
                );
            }
        }
        Command::Report { kind, args } => {
            let kind = ReportKind::parse(&kind)?;
            let cfg = args.into_config()?;
            if let Some(t) = cfg.threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global()?;
            }
            let report = cmd_report(kind, &cfg)?;
            emit(&cfg.out, &report.to_json())?;
            if kind == ReportKind::Selftest && selftest::report_failed(&report) {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}
