#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use timeprops::Tolerances;
use timeprops_cli::commands::{self, CriterionArg, LatticeOp, SearchMode};
use timeprops_cli::report::Report;
use timeprops_cli::spec::{self, System};
use timeprops_cli::InputError;

#[derive(Parser)]
#[command(
    name = "timeprops",
    version,
    about = "Generalized contexts and consistent histories for finite quantum systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Override a tolerance, e.g. `--tol commute_tol=1e-8`. Repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true)]
    tolerances: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check every context for exclusivity and completeness.
    ValidateContext { spec: PathBuf },
    /// Combine the contexts into a generalized context and tabulate probabilities.
    GcCheck { spec: PathBuf },
    /// Probabilities of the histories built from the contexts.
    HistoryProb {
        spec: PathBuf,
        /// One atom label per time, comma separated.
        #[arg(long)]
        history: Option<String>,
    },
    /// Consistency of the history family.
    Consistency {
        spec: PathBuf,
        #[arg(long, value_enum)]
        criterion: CriterionArg,
    },
    /// Lattice operation on the first one or two properties.
    Lattice {
        spec: PathBuf,
        #[arg(long, value_enum)]
        op: LatticeOp,
    },
    /// Search intermediate spin directions on a sphere grid.
    SpinSearch {
        spec: PathBuf,
        #[arg(long, value_enum)]
        mode: SearchMode,
    },
}

impl Command {
    fn spec_path(&self) -> &PathBuf {
        match self {
            Command::ValidateContext { spec }
            | Command::GcCheck { spec }
            | Command::HistoryProb { spec, .. }
            | Command::Consistency { spec, .. }
            | Command::Lattice { spec, .. }
            | Command::SpinSearch { spec, .. } => spec,
        }
    }
}

fn tolerances(overrides: &[String]) -> Result<Tolerances, InputError> {
    let mut tol = Tolerances::default();
    for o in overrides {
        let (name, value) = o.split_once('=').ok_or_else(|| {
            InputError::validation("--tol", format!("expected NAME=VALUE, found {o:?}"))
        })?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| InputError::validation("--tol", format!("{value:?} is not a number")))?;
        if !(value > 0.0) {
            return Err(InputError::validation(
                "--tol",
                format!("{name} must be positive"),
            ));
        }
        if !tol.set(name.trim(), value) {
            return Err(InputError::validation(
                "--tol",
                format!("unknown tolerance {name:?}"),
            ));
        }
    }
    Ok(tol)
}

fn run(cli: &Cli) -> Result<Report, InputError> {
    let tol = tolerances(&cli.tolerances)?;
    let path = cli.command.spec_path();
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut sys = System::load(spec::parse(&text)?, &tol)?;
    match &cli.command {
        Command::ValidateContext { .. } => commands::validate_context(&mut sys, &tol),
        Command::GcCheck { .. } => commands::gc_check(&mut sys, &tol),
        Command::HistoryProb { history, .. } => {
            commands::history_prob(&mut sys, &tol, history.as_deref())
        }
        Command::Consistency { criterion, .. } => commands::consistency(&mut sys, &tol, *criterion),
        Command::Lattice { op, .. } => commands::lattice(&mut sys, &tol, *op),
        Command::SpinSearch { mode, .. } => commands::spin_search(&mut sys, &tol, *mode),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            match cli.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json()),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
