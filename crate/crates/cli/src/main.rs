mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliError, Output};

#[derive(Parser, Debug)]
#[command(
    name = "torquot",
    version,
    about = "Rigid group actions on complex 3-tori and their quotients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    io: Io,
}

#[derive(Args, Debug)]
struct Io {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Biholo,
    Diffeo,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Selector {
    /// Catalog case name, e.g. Z3^3 or Z3^2-rho1.
    #[arg(long)]
    case: Option<String>,
    /// Every case in catalog order.
    #[arg(long)]
    all: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify actions up to biholomorphism or diffeomorphism.
    Classify {
        #[command(flatten)]
        select: Selector,
        #[arg(long, value_enum, default_value_t = ModeArg::Biholo)]
        mode: ModeArg,
    },
    /// Check every catalog row and witness against its golden values.
    VerifyTables,
    /// List the basket vectors allowed by Riemann-Roch.
    Baskets,
    /// Toric certificates for the crepant terminalizations.
    Toric {
        /// 1/9, 1/14, 1/3, 1/7, a full type like 1/14(1,9,11), or all.
        #[arg(long, default_value = "all")]
        target: String,
    },
    /// Fundamental group and universal cover per class.
    Pi1 {
        #[command(flatten)]
        select: Selector,
    },
    /// Normalizer of a case's representation.
    Normalizer {
        #[command(flatten)]
        select: Selector,
    },
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let cat = commands::load_catalog()?;
    match &cli.command {
        Command::Classify { select, mode } => {
            let names = commands::select(&cat, select.case.as_deref(), select.all)?;
            commands::classify(&cat, &names, *mode)
        }
        Command::VerifyTables => commands::verify_tables(&cat),
        Command::Baskets => commands::baskets(&cat),
        Command::Toric { target } => commands::toric(target),
        Command::Pi1 { select } => {
            let names = commands::select(&cat, select.case.as_deref(), select.all)?;
            commands::pi1(&cat, &names)
        }
        Command::Normalizer { select } => {
            let names = commands::select(&cat, select.case.as_deref(), select.all)?;
            commands::normalizer(&cat, &names)
        }
    }
}

fn emit(io: &Io, out: &Output) -> Result<(), CliError> {
    let body = match io.format {
        Format::Text => out.text.clone(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    match &io.out {
        Some(p) => std::fs::write(p, body)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 64 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|out| emit(&cli.io, &out).map(|_| out.code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("torquot: {e}");
            ExitCode::from(e.code())
        }
    }
}
