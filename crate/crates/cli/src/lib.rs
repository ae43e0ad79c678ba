//! Library half of the `vvmf` command-line tool: run configuration, the
//! subcommands and the report formats they emit.

pub mod commands;
pub mod config;
pub mod output;
