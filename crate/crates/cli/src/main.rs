use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tfnp_reductions::campaign::{self, gen, FuzzConfig, Generator, Report, RoundtripConfig};
use tfnp_reductions::problems::{
    brute_force_with, enumerate_solutions, verify_with, Instance, Problem, Solution, VerifyOptions,
};
use tfnp_reductions::reductions::{chain_path, parse_path, Outcome, ReductionId, PWPP_CYCLE};
use tfnp_reductions::{Error, Result};

#[derive(Parser)]
#[command(name = "tfnp", version, about = "Total search problems, reductions and soundness campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Input file; standard input when omitted.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded random instances, one JSON document per line.
    Gen {
        #[arg(long)]
        problem: Problem,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a reduction to an instance, or pull a target solution back.
    Reduce {
        #[arg(long)]
        reduction: ReductionId,
        #[command(flatten)]
        io: Io,
        /// Target solution file to pull back instead of printing the target.
        #[arg(long)]
        pull_back: Option<PathBuf>,
    },
    /// Brute-force a solution.
    Solve {
        #[command(flatten)]
        io: Io,
        /// Print every solution instead of the first.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        strict_index_distinct: bool,
    },
    /// Check a candidate solution; exits 1 when it is rejected.
    Verify {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        strict_index_distinct: bool,
    },
    /// Round-trip soundness campaign for one reduction or path.
    Roundtrip {
        /// A reduction id or a path `a>b>c`.
        #[arg(long)]
        reduction: String,
        #[command(flatten)]
        campaign: CampaignArgs,
        /// List every source instance of each width instead of sampling.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Randomized campaign over several reductions and paths.
    Fuzz {
        /// Reductions to include (repeatable); all when omitted.
        #[arg(long)]
        reduction: Vec<ReductionId>,
        /// Extra paths `a>b>c` (repeatable); the PWPP cycle when omitted.
        #[arg(long)]
        path: Vec<String>,
        #[arg(long)]
        no_paths: bool,
        #[command(flatten)]
        campaign: CampaignArgs,
    },
    /// Apply a path of reductions; with --solve, solve the end and pull back.
    Chain {
        #[arg(long)]
        path: String,
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        solve: bool,
    },
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    count: u64,
    /// Largest witness width.
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    /// Cap on enumerated target solutions per case.
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| io_error(p, e)),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Structural(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn io_error(p: &Path, e: io::Error) -> Error {
    Error::Structural(format!("{}: {e}", p.display()))
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_error(p, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Structural(format!("stdout: {e}"))),
    }
}

fn line(s: String) -> String {
    s + "\n"
}

fn report_out(report: &Report, out: &Option<PathBuf>) -> Result<ExitCode> {
    write_output(out, &report.to_json())?;
    if !report.is_clean() {
        eprintln!("{} failure(s)", report.failures.len());
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen {
            problem,
            n,
            seed,
            count,
            out,
        } => {
            let mut text = String::new();
            for i in 0..count {
                let inst = gen::random_instance(problem, n, &mut gen::rng_for(gen::mix(seed, 0, i)))?;
                text += &line(inst.to_json());
            }
            write_output(&out, &text)?;
        }
        Command::Reduce {
            reduction,
            io,
            pull_back,
        } => {
            let inst = Instance::from_json(&read_input(&io.input)?)?;
            let outcome = chain_path(&[reduction], &inst)?;
            match (outcome, pull_back) {
                (Outcome::Solved(sol), _) => {
                    eprintln!("solved while reducing");
                    write_output(&io.out, &line(sol.to_json()))?;
                }
                (Outcome::Reduced(r), None) => write_output(&io.out, &line(r.target().to_json()))?,
                (Outcome::Reduced(r), Some(p)) => {
                    let sol = Solution::from_json(&fs::read_to_string(&p).map_err(|e| io_error(&p, e))?)?;
                    write_output(&io.out, &line(r.pull_back_checked(&sol)?.to_json()))?;
                }
            }
        }
        Command::Solve {
            io,
            all,
            strict_index_distinct,
        } => {
            let inst = Instance::from_json(&read_input(&io.input)?)?;
            let opts = VerifyOptions { strict_index_distinct };
            let text = if all {
                enumerate_solutions(&inst, opts, None)?
                    .iter()
                    .map(|s| line(s.to_json()))
                    .collect()
            } else {
                line(brute_force_with(&inst, opts)?.to_json())
            };
            write_output(&io.out, &text)?;
        }
        Command::Verify {
            io,
            solution,
            strict_index_distinct,
        } => {
            let inst = Instance::from_json(&read_input(&io.input)?)?;
            let text = fs::read_to_string(&solution).map_err(|e| io_error(&solution, e))?;
            let sol = Solution::from_json(&text)?;
            let verdict = verify_with(&inst, &sol, VerifyOptions { strict_index_distinct })?;
            write_output(&io.out, &line(serde_json::to_string(&verdict).expect("verdicts serialize")))?;
            if !verdict.is_accepted() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Roundtrip {
            reduction,
            campaign: c,
            exhaustive,
        } => {
            let path = parse_path(&reduction)?;
            let cfg = RoundtripConfig {
                seed: c.seed,
                count: c.count,
                n_min: c.n_min,
                n_max: c.n,
                generator: if exhaustive { Generator::Exhaustive } else { Generator::Random },
                per_case_limit: c.limit,
                jobs: c.jobs,
            };
            return report_out(&campaign::run_roundtrip(&path, &cfg)?, &c.out);
        }
        Command::Fuzz {
            reduction,
            path,
            no_paths,
            campaign: c,
        } => {
            let defaults = FuzzConfig::default();
            let paths = if no_paths {
                vec![]
            } else if path.is_empty() {
                vec![PWPP_CYCLE.to_vec()]
            } else {
                path.iter().map(|p| parse_path(p)).collect::<Result<_>>()?
            };
            let cfg = FuzzConfig {
                seed: c.seed,
                count: c.count,
                n_min: c.n_min,
                n_max: c.n,
                reductions: if reduction.is_empty() { ReductionId::ALL.to_vec() } else { reduction },
                paths,
                per_case_limit: c.limit.or(defaults.per_case_limit),
                jobs: c.jobs,
            };
            return report_out(&campaign::run_fuzz(&cfg)?, &c.out);
        }
        Command::Chain { path, io, solve } => {
            let ids = parse_path(&path)?;
            let inst = Instance::from_json(&read_input(&io.input)?)?;
            let text = match chain_path(&ids, &inst)? {
                Outcome::Solved(sol) => line(sol.to_json()),
                Outcome::Reduced(r) if solve => {
                    let target_sol = brute_force_with(r.target(), VerifyOptions::default())?;
                    line(r.pull_back(&target_sol)?.to_json())
                }
                Outcome::Reduced(r) => {
                    eprintln!(
                        "{}: {} gates → {} gates",
                        r.name(),
                        inst.gate_count(),
                        r.target().gate_count()
                    );
                    line(r.target().to_json())
                }
            };
            write_output(&io.out, &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
