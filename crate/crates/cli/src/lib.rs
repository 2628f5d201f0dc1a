//! Front end for balance-system analyses: the system-file language, the
//! subcommands and report rendering.

pub mod commands;
pub mod report;
pub mod syntax;

pub use commands::{parse_point, run, CliError, Command};
pub use report::{render, Format, Report};
pub use syntax::{parse_section, parse_system, InputError, SystemDocument};
