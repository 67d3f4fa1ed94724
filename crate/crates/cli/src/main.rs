//! `mubkit`: generate, transform, verify, and search for MUB and SIC
//! candidates from the command line.
//!
//! Exit codes: 0 on success (for `verify`, a passing report), 1 for a failing
//! verification, 2 for usage errors and malformed input.

mod commands;
mod format;

use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand, ValueEnum};

use mubkit::mub::DEFAULT_TOLERANCE;
use mubkit::search::{Formulation, Problem, SearchConfig};

#[derive(Parser)]
#[command(
    name = "mubkit",
    version,
    about = "Mutually unbiased bases and SIC POVMs: fixtures, representation transforms, verification, and numerical search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the standard complete set of d + 1 mutually unbiased bases for a
    /// prime dimension
    GenMub {
        /// Prime dimension between 2 and 31
        #[arg(long)]
        d: usize,
        /// Candidate file to write
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the known SIC orbit for dimension 2 or 3
    GenSic {
        /// Dimension (2 or 3)
        #[arg(long)]
        d: usize,
        /// Candidate file to write
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a candidate file and emit a verification report
    Verify {
        /// Candidate file to check
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Residual tolerance applied to every check
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Verify lifted vectors; state files are lifted first
        #[arg(long)]
        bloch: bool,
        /// Write the report here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map every state vector to its lifted d*d-component vector
    Lift {
        /// Candidate file holding state vectors
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Candidate file to write
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover state vectors from a lifted file, fixing each phase by making
    /// the first sizable component real positive
    Reconstruct {
        /// Candidate file holding lifted vectors
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Candidate file to write
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the multi-restart gradient-descent search and write the best
    /// candidate found
    Search {
        /// Dimension of the state space
        #[arg(long)]
        d: usize,
        /// Target: "mub:<bases>" or "sic"
        #[arg(long, value_parser = parse_problem)]
        problem: ProblemArg,
        /// Which representation the objective evaluates through
        #[arg(long, value_enum)]
        formulation: FormulationArg,
        /// Number of random restarts
        #[arg(long)]
        restarts: usize,
        /// Base seed; restart r uses seed + r
        #[arg(long)]
        seed: u64,
        /// Iteration cap per restart
        #[arg(long = "max-iter")]
        max_iter: Option<usize>,
        /// Objective value at which a restart counts as converged
        #[arg(long = "success-threshold")]
        success_threshold: Option<f64>,
        /// Candidate file to write
        #[arg(long)]
        out: PathBuf,
    },
    /// Pretty-print a report file
    Report {
        /// Report file to render
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
    },
}

#[derive(Debug, Clone)]
enum ProblemArg {
    Mub { bases: usize },
    Sic,
}

fn parse_problem(s: &str) -> Result<ProblemArg, String> {
    if s == "sic" {
        return Ok(ProblemArg::Sic);
    }
    if let Some(count) = s.strip_prefix("mub:") {
        let bases = count
            .parse::<usize>()
            .map_err(|_| format!("expected an integer basis count after \"mub:\", found \"{count}\""))?;
        return Ok(ProblemArg::Mub { bases });
    }
    Err(format!("expected \"mub:<bases>\" or \"sic\", found \"{s}\""))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormulationArg {
    /// Overlaps of the d-component state vectors
    State,
    /// Inner products of the lifted d*d-component vectors
    Bloch,
}

fn main() {
    // Die quietly when the output consumer closes the pipe, as unix filters
    // do, instead of panicking on the next print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => process::exit(code),
        Err(message) => {
            eprintln!("error: {message}");
            process::exit(2);
        }
    }
}

fn run(command: Command) -> Result<i32, String> {
    match command {
        Command::GenMub { d, out } => commands::gen_mub(d, &out),
        Command::GenSic { d, out } => commands::gen_sic(d, &out),
        Command::Verify { input, tol, bloch, out } => {
            commands::verify(&input, tol, bloch, out.as_deref())
        }
        Command::Lift { input, out } => commands::lift(&input, &out),
        Command::Reconstruct { input, out } => commands::reconstruct(&input, &out),
        Command::Search {
            d,
            problem,
            formulation,
            restarts,
            seed,
            max_iter,
            success_threshold,
            out,
        } => {
            let problem_echo = match &problem {
                ProblemArg::Mub { bases } => format!("mub:{bases}"),
                ProblemArg::Sic => "sic".to_string(),
            };
            let formulation_echo = match formulation {
                FormulationArg::State => "state",
                FormulationArg::Bloch => "bloch",
            };
            let mut config = SearchConfig::new(
                d,
                match problem {
                    ProblemArg::Mub { bases } => Problem::Mub { bases },
                    ProblemArg::Sic => Problem::Sic,
                },
                match formulation {
                    FormulationArg::State => Formulation::StateSpace,
                    FormulationArg::Bloch => Formulation::BlochSpace,
                },
            );
            config.restarts = restarts;
            config.seed = seed;
            if let Some(cap) = max_iter {
                config.max_iterations = cap;
            }
            if let Some(threshold) = success_threshold {
                config.success_threshold = threshold;
            }
            commands::search(config, &problem_echo, formulation_echo, &out)
        }
        Command::Report { input } => commands::report(&input),
    }
}
