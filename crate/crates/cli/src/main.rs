use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use cnot_forge::aecm::{aecm_partial, AecmConfig};
use cnot_forge::gf2::{first_mismatch, random_invertible};
use cnot_forge::harness::{self, HitSample, Method, SynthOptions, Table1Config};
use cnot_forge::oracle::{self, DistanceTable};
use cnot_forge::{BitMatrix, Circuit, Error, TieBreak};

const TABLE_DIR_ENV: &str = "CNOT_FORGE_TABLE_DIR";

#[derive(Parser)]
#[command(
    name = "cnot-forge",
    version,
    about = "CNOT circuit synthesis for linear reversible functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a circuit for a matrix file.
    Synth(SynthArgs),
    /// Check that a circuit implements a matrix.
    Verify { matrix: PathBuf, circuit: PathBuf },
    /// Exact minimum gate counts for small line counts.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Benchmark reports as CSV.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Write a random invertible matrix.
    Gen {
        #[arg(long)]
        lines: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SynthArgs {
    /// Matrix file, or `-` for stdin.
    input: PathBuf,
    #[arg(long, default_value = "mcg")]
    method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop AECM once the cost is at most this value and write the remainder matrix.
    #[arg(long, default_value_t = 0)]
    threshold: u32,
    /// Minimum cost drop a single stage-1 gate must achieve.
    #[arg(long, default_value_t = 2)]
    stage1_threshold: i32,
    /// Column section width for algorithm1.
    #[arg(long)]
    section_size: Option<usize>,
    /// Keep the best of this many seeded runs (probabilistic methods).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    passes: u64,
    #[arg(long)]
    no_verify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Build the distance table for `n` lines and save it.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram of exact minimum gate counts.
    Hist {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimum gate count of a matrix; `--out` also writes a minimal circuit.
    Min {
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Resynthesize short runs of a circuit with minimal subcircuits.
    Peephole {
        circuit: PathBuf,
        /// Line count of the circuit.
        #[arg(long)]
        lines: usize,
        /// Window width, i.e. the table's line count.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Markdown table instead of CSV.
    #[arg(long)]
    markdown: bool,
    /// Include wall time in the CSV.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Mean gate counts of AECM, Algorithm 1 and MCG on random matrices.
    Table1 {
        #[arg(long, value_delimiter = ',', default_value = "8,12,16")]
        lines: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// MCG is skipped above this many lines.
        #[arg(long, default_value_t = 40)]
        line_cap: usize,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// How often each method reaches the exact minimum on 5-line functions.
    Hitrates {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Every invertible 5-line function instead of a sample.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeated MCGP and AECMP runs on the bundled 16-line function, or a given matrix.
    Table3 {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Verification { .. }) => 1,
        Some(Error::Parse { .. } | Error::InvalidGate { .. }) => 2,
        Some(Error::DimensionTooLarge(_) | Error::DimensionMismatch { .. }) => 3,
        _ => 4,
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Synth(args) => synth(args),
        Command::Verify { matrix, circuit } => verify(&matrix, &circuit),
        Command::Oracle(cmd) => oracle_cmd(cmd),
        Command::Bench(cmd) => bench(cmd),
        Command::Gen { lines, seed, out } => {
            if lines == 0 || lines > cnot_forge::MAX_LINES {
                return Err(Error::DimensionTooLarge(lines).into());
            }
            emit(out.as_deref(), &random_invertible(lines, seed).to_text())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn synth(args: SynthArgs) -> anyhow::Result<ExitCode> {
    let m = read_matrix(&args.input)?;
    let opts = SynthOptions {
        seed: args.seed,
        stage1_min_improvement: args.stage1_threshold,
        section_size: args.section_size,
    };
    let start = Instant::now();

    if args.threshold > 0 {
        if !matches!(args.method, Method::Aecm | Method::Aecmp) {
            bail!("--threshold applies to aecm and aecmp only");
        }
        let cfg = AecmConfig {
            stage1_min_improvement: opts.stage1_min_improvement,
            tie_break: if args.method.is_probabilistic() {
                TieBreak::Seeded(args.seed)
            } else {
                TieBreak::Deterministic
            },
        };
        let r = aecm_partial(&m, args.threshold, &cfg)?;
        emit(args.out.as_deref(), &r.state.m().to_text())?;
        eprintln!(
            "method={} lines={} residual_cost={} gates={} elapsed={:.3}s",
            args.method,
            m.dim(),
            r.residual_cost,
            r.state.gate_count(),
            start.elapsed().as_secs_f64()
        );
        return Ok(ExitCode::SUCCESS);
    }

    let s = harness::synthesize_best_of(args.method, &m, &opts, args.passes as usize)?;
    let elapsed = start.elapsed().as_secs_f64();
    if !args.no_verify {
        if let Some((i, j)) = first_mismatch(&s.circuit, &m) {
            eprintln!("verification failed at entry ({i}, {j})");
            return Err(Error::Verification {
                method: args.method.to_string(),
                n: m.dim(),
            }
            .into());
        }
    }
    emit(args.out.as_deref(), &s.circuit.to_text())?;
    let convergent = s
        .convergent
        .map(|c| c.to_string())
        .unwrap_or_else(|| "-".into());
    eprintln!(
        "method={} lines={} gates={} convergent={} elapsed={:.3}s",
        args.method,
        m.dim(),
        s.circuit.len(),
        convergent,
        elapsed
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(matrix: &Path, circuit: &Path) -> anyhow::Result<ExitCode> {
    let m = read_matrix(matrix)?;
    let c = Circuit::parse(&read_text(circuit)?, m.dim())
        .with_context(|| format!("reading {}", circuit.display()))?;
    match first_mismatch(&c, &m) {
        None => {
            println!(
                "ok: {} gates implement the {}-line matrix",
                c.len(),
                m.dim()
            );
            Ok(ExitCode::SUCCESS)
        }
        Some((i, j)) => {
            println!(
                "mismatch at entry ({i}, {j}): circuit gives {}, matrix has {}",
                c.to_matrix().get(i, j) as u8,
                m.get(i, j) as u8
            );
            Ok(ExitCode::from(1))
        }
    }
}

fn oracle_cmd(cmd: OracleCommand) -> anyhow::Result<ExitCode> {
    match cmd {
        OracleCommand::Build { n, out } => {
            let start = Instant::now();
            let table = oracle::build_distance_table(n)?;
            let path = match out {
                Some(p) => p,
                None => table_dir()
                    .unwrap_or_else(|| PathBuf::from("."))
                    .join(format!("dist_n{n}.bin")),
            };
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            table
                .save(&path)
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!(
                "built {} entries for n={n} in {:.3}s, saved to {}",
                table.len(),
                start.elapsed().as_secs_f64(),
                path.display()
            );
        }
        OracleCommand::Hist { n, out } => {
            let table = load_table(n)?;
            emit(
                out.as_deref(),
                &harness::histogram_to_csv(&table.histogram()),
            )?;
        }
        OracleCommand::Min { matrix, out } => {
            let m = read_matrix(&matrix)?;
            let table = load_table(m.dim())?;
            println!("{}", oracle::exact_min_count(&m, &table)?);
            if let Some(path) = out {
                emit(
                    Some(&path),
                    &oracle::exact_min_circuit(&m, &table)?.to_text(),
                )?;
            }
        }
        OracleCommand::Peephole {
            circuit,
            lines,
            n,
            out,
        } => {
            let c = Circuit::parse(&read_text(&circuit)?, lines)
                .with_context(|| format!("reading {}", circuit.display()))?;
            let table = load_table(n)?;
            let shorter = oracle::peephole_optimize(&c, &table);
            emit(out.as_deref(), &shorter.to_text())?;
            eprintln!("gates {} -> {}", c.len(), shorter.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bench(cmd: BenchCommand) -> anyhow::Result<ExitCode> {
    match cmd {
        BenchCommand::Table1 {
            lines,
            trials,
            line_cap,
            report,
        } => {
            if let Some(&n) = lines.iter().find(|&&n| n == 0 || n > cnot_forge::MAX_LINES) {
                return Err(Error::DimensionTooLarge(n).into());
            }
            let cfg = Table1Config {
                trials,
                seed: report.seed,
                mcg_line_cap: line_cap,
            };
            write_records(&report, &harness::run_table1(&lines, &cfg)?)?;
        }
        BenchCommand::Hitrates {
            samples,
            all,
            seed,
            out,
        } => {
            let rates = if !all && samples == 0 {
                Vec::new()
            } else {
                let table = load_table(5)?;
                let sample = if all {
                    HitSample::All
                } else {
                    HitSample::Random(samples)
                };
                harness::run_hit_rates(sample, seed, &table)?
            };
            emit(out.as_deref(), &harness::hit_rates_to_csv(&rates))?;
        }
        BenchCommand::Table3 {
            trials,
            matrix,
            report,
        } => {
            let records = match matrix {
                Some(path) => {
                    harness::run_probabilistic(&read_matrix(&path)?, trials, report.seed)?
                }
                None => harness::run_table3(trials, report.seed)?,
            };
            write_records(&report, &records)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn write_records(report: &ReportArgs, records: &[harness::BenchRecord]) -> anyhow::Result<()> {
    let text = if report.markdown {
        harness::records_to_markdown(records)
    } else {
        harness::records_to_csv(records, report.timing)
    };
    emit(report.out.as_deref(), &text)
}

fn table_dir() -> Option<PathBuf> {
    std::env::var_os(TABLE_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

fn load_table(n: usize) -> anyhow::Result<DistanceTable> {
    Ok(DistanceTable::load_or_build(n, table_dir().as_deref())?)
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_matrix(path: &Path) -> anyhow::Result<BitMatrix> {
    BitMatrix::parse(&read_text(path)?).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
