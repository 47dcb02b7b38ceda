//! Command-line and HTTP front ends for the `toporesolve` engine.

pub mod args;
pub mod commands;
pub mod error;
pub mod server;

pub use args::Cli;
pub use commands::run;
pub use error::CliError;

#[cfg(test)]
mod tests;
