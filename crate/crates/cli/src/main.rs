use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use modaldoc_cli::commands::{self, Construction};
use modaldoc_cli::model::DEFAULT_MAX_SIZE;
use modaldoc_cli::{CliError, Report};

#[derive(Parser)]
#[command(name = "modaldoc", version, about = "Check doctrines, adjunctions and the modalities they induce")]
struct Cli {
    /// Print one JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest doctrine (total fiber elements) or candidate count to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SIZE)]
    max_size: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the law suites of declarations in a model file.
    Check {
        file: String,
        /// Declarations to check; all of them when omitted.
        names: Vec<String>,
        /// Check every declaration.
        #[arg(long, conflicts_with = "names")]
        all: bool,
    },
    /// Build AM, CM, MC, MA or the vertical factor from a declaration.
    #[command(group(ArgGroup::new("construction").required(true).args(["modality", "mc", "ma", "vertical"])))]
    Derive {
        file: String,
        /// Declaration kind and name, e.g. `--from adjunction A`.
        #[arg(long, num_args = 2, value_names = ["KIND", "NAME"], required = true)]
        from: Vec<String>,
        #[arg(long)]
        modality: bool,
        #[arg(long)]
        mc: bool,
        #[arg(long)]
        ma: bool,
        #[arg(long)]
        vertical: bool,
    },
    /// Dump the Eilenberg-Moore doctrine of a comonad.
    Em {
        file: String,
        #[arg(long)]
        comonad: String,
    },
    /// Both factorizations of an adjunction.
    Factor {
        file: String,
        #[arg(long)]
        adjunction: String,
    },
    /// Temporal fixed points against their path oracles.
    Temporal {
        file: String,
        /// G, AG or EG.
        #[arg(long)]
        op: String,
        #[arg(long)]
        coalgebra: String,
        /// A subset such as `{s0,s1}`; every subset when omitted.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// The full acceptance run over the bundled instances.
    Suite,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let load = |file: &str| commands::load_path(file, cli.max_size);
    match &cli.command {
        Command::Check { file, names, .. } => commands::check(&load(file)?, names),
        Command::Derive {
            file,
            from,
            modality,
            mc,
            ma,
            ..
        } => {
            let construction = match (modality, mc, ma) {
                (true, _, _) => Construction::Modality,
                (_, true, _) => Construction::Mc,
                (_, _, true) => Construction::Ma,
                _ => Construction::Vertical,
            };
            commands::derive(&load(file)?, &from[0], &from[1], construction)
        }
        Command::Em { file, comonad } => commands::em(&load(file)?, comonad, cli.max_size),
        Command::Factor { file, adjunction } => commands::factor(&load(file)?, adjunction),
        Command::Temporal {
            file,
            op,
            coalgebra,
            alpha,
        } => commands::temporal(&load(file)?, op, coalgebra, alpha.as_deref()),
        Command::Suite => Ok(commands::suite(cli.seed)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(if report.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
