use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toric_tools::commands::{self, ExportWhat, FrobMethod, GroupChoice, Report, Target};
use toric_tools::ToolError;

#[derive(Parser)]
#[command(name = "toric", about = "Toric varieties, line bundle cohomology and exceptional collections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of a catalog fan or a fan file.
    Describe {
        target: Option<String>,
        #[arg(long, value_name = "FILE")]
        fan: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Recompute the threefold table and compare.
    Table1 {
        #[arg(long)]
        json: bool,
    },
    /// Classes of Frobenius summands.
    Frobenius {
        target: Option<String>,
        #[arg(long, value_name = "FILE")]
        fan: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "exact")]
        method: FrobMethod,
        #[arg(long, default_value_t = 12)]
        lmax: u32,
        #[arg(long)]
        json: bool,
    },
    /// Check a collection: exceptional, strong, stable, block structure.
    Check {
        /// `TARGET COLLECTION`, or just `COLLECTION` with --fan. The collection
        /// is a catalog name or a JSON file.
        #[arg(required = true, num_args = 1..=2, value_name = "TARGET COLLECTION")]
        args: Vec<String>,
        #[arg(long, value_name = "FILE")]
        fan: Option<PathBuf>,
        /// `full`, `none`, or a group JSON file.
        #[arg(long, default_value = "none")]
        group: GroupChoice,
        #[arg(long)]
        strong: bool,
        #[arg(long)]
        json: bool,
    },
    /// Automorphism group of the fan.
    Group {
        target: Option<String>,
        #[arg(long, value_name = "FILE")]
        fan: Option<PathBuf>,
        /// For V<n>: the S_{n+1} x C_2 subgroup.
        #[arg(long)]
        vn_symmetric: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write a catalog fan, entry or collection as JSON.
    Export {
        target: String,
        #[arg(long, conflicts_with = "entry")]
        collection: Option<String>,
        #[arg(long)]
        entry: bool,
    },
}

fn emit(report: Report, json: bool) -> ExitCode {
    print!("{}", if json { report.json } else { report.text });
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, ToolError> {
    Ok(match cli.command {
        Command::Describe { target, fan, json } => emit(commands::describe(&Target::from_args(target, fan)?)?, json),
        Command::Table1 { json } => emit(commands::table1()?, json),
        Command::Frobenius { target, fan, method, lmax, json } => {
            if lmax == 0 {
                return Err(ToolError::Input("--lmax must be positive".into()));
            }
            emit(commands::frobenius(&Target::from_args(target, fan)?, method, lmax)?, json)
        }
        Command::Check { mut args, fan, group, strong, json } => {
            let collection = args.pop().expect("at least one positional");
            let target = args.pop();
            emit(commands::check(&Target::from_args(target, fan)?, &collection, &group, strong)?, json)
        }
        Command::Group { target, fan, vn_symmetric, json } => {
            emit(commands::group(&Target::from_args(target, fan)?, vn_symmetric)?, json)
        }
        Command::Export { target, collection, entry } => {
            let what = match (collection, entry) {
                (Some(c), _) => ExportWhat::Collection(c),
                (None, true) => ExportWhat::Entry,
                (None, false) => ExportWhat::Fan,
            };
            print!("{}", commands::export(&target, &what)?);
            ExitCode::SUCCESS
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
