//! Command-line front end: expression parsing, problem files, rendering and
//! subcommands.

pub mod commands;
pub mod format;
pub mod parse;
pub mod problem;

pub use commands::{run_command, Outcome};
