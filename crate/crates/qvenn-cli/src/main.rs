//! `qvenn` — entropy Venn diagrams, separability diagnostics, unitary
//! measurement experiments, and Kholevo-bound reports from the command
//! line.
//!
//! Exit codes: 0 success, 1 property failure (verify), 2 usage or parse
//! error, 3 numeric failure.

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod render;
mod report;
mod spec;
mod verify;

/// Errors a command can raise, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: grammar, file contents, unknown names. Exit 2.
    Parse(String),
    /// The math rejected the input (invariants, domains). Exit 3.
    Numeric(String),
}

impl From<spec::SpecError> for CliError {
    fn from(e: spec::SpecError) -> Self {
        if e.numeric {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Parse(e.to_string())
        }
    }
}

impl From<qvenn::Error> for CliError {
    fn from(e: qvenn::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "qvenn",
    version,
    about = "Quantum entropy Venn diagrams, separability tests, unitary measurement \
             experiments, and Kholevo-bound reports",
    after_help = "STATE SPECS:\n  \
        bell:phi+ | bell:phi- | bell:psi+ | bell:psi-\n  \
        ghz:N                  N-party GHZ state\n  \
        werner:X               singlet weight X in [0,1]\n  \
        mixed:DxD[xD...]       maximally mixed state\n  \
        random:DxD,RANK,SEED   seeded random mixed state\n  \
        zero|one|plus|minus|iplus|iminus   single-qubit pure states\n  \
        PATH.json              explicit matrix, pure vector, or separable mixture\n\n\
        BASES: z | x | y | deg:ANGLE"
)]
struct Cli {
    /// Output format for the run document.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the structured document to a file (in addition to stdout).
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    /// Base seed for randomized suites.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Trial count for randomized suites.
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    /// Regularization used inside operator logarithms.
    #[arg(long, global = true, default_value_t = qvenn::tol::DEFAULT_EPSILON)]
    epsilon: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Render the entropy Venn diagram of a state for a 2- or 3-part split.
    Diagram {
        /// State specification (see STATE SPECS below).
        #[arg(long)]
        state: String,
        /// Partition, e.g. A/B, AB/C, or A/B/C.
        #[arg(long)]
        split: String,
        /// Comma-separated labels to trace out first.
        #[arg(long)]
        trace_out: Option<String>,
    },
    /// Run the separability diagnostics on a bipartite state.
    Separability {
        #[arg(long)]
        state: String,
        /// Two-part split; defaults to first label vs. the rest.
        #[arg(long)]
        split: Option<String>,
    },
    /// Run a measurement experiment.
    Measure {
        #[command(subcommand)]
        scenario: Scenario,
    },
    /// Measure an ensemble and report the Kholevo-bound decomposition.
    Kholevo {
        /// Path to an ensemble file: {"priors": [...], "signals": [...]}.
        #[arg(long)]
        ensemble: String,
        /// Measurement basis: z, x, y, or deg:ANGLE.
        #[arg(long, default_value = "z")]
        basis: String,
        /// Also sweep rotated bases with this step (degrees).
        #[arg(long)]
        sweep: Option<f64>,
    },
    /// Run a seeded property suite; exits 1 on any violation.
    Verify {
        /// inequalities | chain-rules | separability-survey | measurement | kholevo | all
        suite: String,
        /// Local dimensions for the separability survey, e.g. 2x2.
        #[arg(long, default_value = "2x2")]
        dims: String,
    },
}

#[derive(Subcommand)]
enum Scenario {
    /// Attach the same observable repeatedly to one system.
    Chain {
        /// Named pure state: zero, one, plus, minus, iplus, iminus.
        #[arg(long, default_value = "plus")]
        state: String,
        /// Observable basis.
        #[arg(long, default_value = "z")]
        obs: String,
        /// Number of ancillae to attach.
        #[arg(long, default_value_t = 2)]
        ancillae: usize,
    },
    /// Measure two observables in sequence on one system.
    Sequential {
        #[arg(long, default_value = "plus")]
        state: String,
        /// Two bases, e.g. z,x.
        #[arg(long, default_value = "z,x")]
        obs: String,
    },
    /// Measure the two halves of an entangled pair.
    Epr {
        /// Two bases, e.g. z,z.
        #[arg(long, default_value = "z,z")]
        axes: String,
    },
}

fn main() {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");

    let result = match &cli.command {
        Command::Diagram {
            state,
            split,
            trace_out,
        } => commands::cmd_diagram(&echo, state, trace_out.as_deref(), split, cli.epsilon),
        Command::Separability { state, split } => {
            commands::cmd_separability(&echo, state, split.as_deref())
        }
        Command::Measure { scenario } => match scenario {
            Scenario::Chain {
                state,
                obs,
                ancillae,
            } => commands::cmd_measure_chain(&echo, state, obs, *ancillae),
            Scenario::Sequential { state, obs } => {
                commands::cmd_measure_sequential(&echo, state, obs)
            }
            Scenario::Epr { axes } => commands::cmd_measure_epr(&echo, axes),
        },
        Command::Kholevo {
            ensemble,
            basis,
            sweep,
        } => commands::cmd_kholevo(&echo, ensemble, basis, *sweep),
        Command::Verify { suite, dims } => {
            let parsed: Vec<usize> = dims
                .split('x')
                .filter_map(|d| d.parse().ok())
                .collect();
            if parsed.len() != 2 {
                eprintln!("error: --dims must look like 2x2");
                std::process::exit(2);
            }
            verify::cmd_verify(&echo, suite, cli.seed, cli.trials, (parsed[0], parsed[1]))
        }
    };

    match result {
        Ok(run) => {
            let structured = report::render_structured(&run.tree);
            match cli.format {
                Format::Text => {
                    print!("{}", run.text);
                    eprintln!("wall time: {:.1} ms", run.wall_time.as_secs_f64() * 1e3);
                }
                Format::Structured => print!("{structured}"),
            }
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &structured) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(3);
                }
            }
            std::process::exit(if run.failed { 1 } else { 0 });
        }
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
    }
}
