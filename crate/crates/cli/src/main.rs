use std::path::{Path, PathBuf};
use std::process::ExitCode;

use balvar_cli::{parse_system, render, run, CliError, Command, Format, InputError};
use clap::{Parser, Subcommand};

/// Symbolic analyses of balance-law systems.
#[derive(Parser)]
#[command(name = "balvar", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Balance residuals and the source form.
    Equations { file: PathBuf },
    /// Helmholtz test, trivial quasi-Lagrangian test and Godunov form.
    Check { file: PathBuf },
    /// Quasi-Lagrangian and the Lagrangian / non-Lagrangian splittings.
    Decompose { file: PathBuf },
    /// Friedrichs symmetric-hyperbolicity test at a point.
    Hyperbolic {
        file: PathBuf,
        /// Comma-separated rationals: base coordinates, then fields.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Residuals including blocks of order two and higher.
    Higher { file: PathBuf },
    /// Substitutes a section given as `field = expr` lines.
    Verify {
        file: PathBuf,
        #[arg(long)]
        section: PathBuf,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| {
        InputError::Usage { code: "E_IO", message: format!("{}: {e}", path.display()) }.into()
    })
}

fn execute(cli: &Cli) -> Result<String, (Option<PathBuf>, CliError)> {
    let (file, command) = match &cli.command {
        Cmd::Equations { file } => (file, Command::Equations),
        Cmd::Check { file } => (file, Command::Check),
        Cmd::Decompose { file } => (file, Command::Decompose),
        Cmd::Hyperbolic { file, at } => (file, Command::Hyperbolic { at: at.clone() }),
        Cmd::Higher { file } => (file, Command::Higher),
        Cmd::Verify { file, section } => {
            let text = read(section).map_err(|e| (None, e))?;
            (file, Command::Verify { section: text })
        }
    };
    let with_file = |e: CliError| (Some(file.clone()), e);
    let text = read(file).map_err(|e| (None, e))?;
    let doc = parse_system(&text).map_err(|e| with_file(e.into()))?;
    let report = run(&command, &doc).map_err(with_file)?;
    Ok(render(&report, cli.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| execute(&cli)));
    match outcome {
        Ok(Ok(out)) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, out) {
                    eprintln!("error[E_IO]: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{out}");
            }
            ExitCode::SUCCESS
        }
        Ok(Err((file, e))) => {
            match file {
                Some(f) => {
                    let sep = if matches!(&e, CliError::Input(i) if i.has_position()) { "" } else { " " };
                    eprintln!("error[{}]: {}:{sep}{e}", e.code(), f.display())
                }
                None => eprintln!("error[{}]: {e}", e.code()),
            }
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => {
            eprintln!("error[E_INTERNAL]: analysis panicked");
            ExitCode::from(3)
        }
    }
}
