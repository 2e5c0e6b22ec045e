//! `qswitch`: Bargmann-invariant measurement toolkit front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input/validation
//! error, 3 resource-cap error.

mod commands;
mod report;
mod states;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qswitch_core::protocol::{EvenStrategy, Family};
use qswitch_core::Error;

use commands::{PermAction, ProtocolArgs, VerifyArgs};
use report::Report;

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Main,
    Alt,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Main => Family::Main,
            FamilyArg::Alt => Family::Alt,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EvenStrategyArg {
    Repeat,
    Convex,
}

#[derive(Parser)]
#[command(name = "qswitch", version, about = "Higher-order Bargmann invariants via the quantum switch")]
struct Cli {
    /// Output format. JSON is canonical; CSV is a flattened projection.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Suppress the timestamp so identical runs emit identical bytes.
    #[arg(long, global = true)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the state-consuming subcommands: states come from a
/// file or from a seeded generator, never both.
#[derive(clap::Args)]
struct StateSource {
    /// Path to a JSON state file (see schemas/states.schema.json).
    #[arg(long)]
    states: Option<PathBuf>,

    /// Generate this many seeded Haar-random states instead.
    #[arg(long)]
    random: Option<usize>,

    /// Local dimension for generated states.
    #[arg(long, default_value_t = 2)]
    dim: usize,

    /// Generate rank-2 mixed states instead of pure ones.
    #[arg(long)]
    mixed: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the order-n invariant of a state tuple by every
    /// applicable method and report pairwise residuals.
    Invariant {
        #[command(flatten)]
        source: StateSource,
        /// Seed for generated states.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the switch protocol (exact with --shots 0, sampled otherwise)
    /// and compare against the direct oracle.
    Protocol {
        #[command(flatten)]
        source: StateSource,
        #[arg(long, value_enum, default_value = "main")]
        family: FamilyArg,
        /// 0 means exact evaluation.
        #[arg(long, default_value_t = 0)]
        shots: u64,
        /// Seed for sampling and for generated states.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Even-order reduction strategy (required meaning for even n;
        /// ignored for odd n).
        #[arg(long, value_enum, default_value = "repeat")]
        even_strategy: EvenStrategyArg,
        /// 1-based position the even-order strategy acts on.
        #[arg(long, default_value_t = 1)]
        repeat_index: usize,
    },
    /// Simulate the switch of two unitaries with a Hadamard-test
    /// circuit and report fidelity and query counts.
    SimulateSwitch {
        /// JSON file with two matrix entries (A, B) and an optional
        /// vector entry for the input state.
        #[arg(long)]
        states: Option<PathBuf>,
        /// Dimension for generated Haar inputs.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the identity verification suite; exits 1 iff any check fails.
    Verify {
        /// Largest odd order for the exact permutation identities.
        #[arg(long, default_value_t = 21)]
        symbolic_max: usize,
        /// Largest odd order for numeric protocol-vs-oracle checks.
        #[arg(long, default_value_t = 9)]
        numeric_max: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Largest order for the pair-set recursion check.
        #[arg(long, default_value_t = 11)]
        lemma5_max: usize,
        /// Run the even-order no-go witness at this (even) order.
        #[arg(long)]
        nogo: Option<usize>,
        /// Haar trials for the no-go determinant check.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Cycle-notation utilities.
    Perm {
        #[command(subcommand)]
        action: PermCommand,
    },
}

#[derive(Subcommand)]
enum PermCommand {
    /// Compose two permutations (apply-right-first): result(x) = p(q(x)).
    Compose { p: String, q: String },
    /// Invert a permutation.
    Invert { p: String },
    /// Report a permutation canonically with its parity.
    Parity { p: String },
    /// Print the generator pair, switch word, and preprocessing
    /// permutation of a protocol family at odd order n.
    Family {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "main")]
        family: FamilyArg,
    },
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let det = cli.deterministic;
    match &cli.command {
        Command::Invariant { source, seed } => {
            let t = states::load_tuple(
                source.states.as_deref(),
                source.random,
                source.dim,
                *seed,
                source.mixed,
            )?;
            let mut report = Report::new("invariant", det);
            report.seed = source.random.map(|_| *seed);
            commands::cmd_invariant(&t, report)
        }
        Command::Protocol {
            source,
            family,
            shots,
            seed,
            even_strategy,
            repeat_index,
        } => {
            let t = states::load_tuple(
                source.states.as_deref(),
                source.random,
                source.dim,
                *seed,
                source.mixed,
            )?;
            let strategy = match even_strategy {
                EvenStrategyArg::Repeat => EvenStrategy::RepeatPure { index: *repeat_index },
                EvenStrategyArg::Convex => EvenStrategy::ConvexDecompose { index: *repeat_index },
            };
            let args = ProtocolArgs {
                family: (*family).into(),
                shots: *shots,
                seed: *seed,
                even_strategy: Some(strategy),
            };
            let mut report = Report::new("protocol", det);
            report.seed = Some(*seed);
            commands::cmd_protocol(&t, &args, report)
        }
        Command::SimulateSwitch { states: path, dim, seed } => {
            let text = match path {
                Some(p) => Some(std::fs::read_to_string(p).map_err(|e| {
                    Error::invalid_input(format!("cannot read {}: {e}", p.display()))
                })?),
                None => None,
            };
            let mut report = Report::new("simulate-switch", det);
            report.seed = path.is_none().then_some(*seed);
            commands::cmd_simulate_switch(text.as_deref(), *dim, *seed, report)
        }
        Command::Verify {
            symbolic_max,
            numeric_max,
            dim,
            lemma5_max,
            nogo,
            trials,
            seed,
        } => {
            if nogo.is_some_and(|n| n % 2 != 0 || n < 2) {
                return Err(Error::invalid_input("--nogo takes an even order >= 2"));
            }
            let args = VerifyArgs {
                symbolic_max: *symbolic_max,
                numeric_max: *numeric_max,
                dim: *dim,
                lemma5_max: *lemma5_max,
                nogo: *nogo,
                trials: *trials,
                seed: *seed,
            };
            let mut report = Report::new("verify", det);
            report.seed = Some(*seed);
            commands::cmd_verify(&args, report)
        }
        Command::Perm { action } => {
            let action = match action {
                PermCommand::Compose { p, q } => PermAction::Compose(p, q),
                PermCommand::Invert { p } => PermAction::Invert(p),
                PermCommand::Parity { p } => PermAction::Parity(p),
                PermCommand::Family { n, family } => PermAction::Family {
                    n: *n,
                    family: (*family).into(),
                },
            };
            commands::cmd_perm(&action, Report::new("perm", det))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SizeCap { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
