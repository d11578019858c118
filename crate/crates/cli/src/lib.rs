//! Command-line front end for `metaforge-core`: source fetching with
//! fixture record/replay, configuration, output files and the
//! `metaforge` subcommands.

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod scaffold;
pub mod sources;

pub use cli::run;
pub use commands::Exit;
