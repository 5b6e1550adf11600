//! Library side of the `prismcactus` command: every subcommand is a
//! function returning a [`report::RunReport`].

pub mod commands;
pub mod render;
pub mod report;

pub use commands::*;
pub use report::{CliError, RunReport};
