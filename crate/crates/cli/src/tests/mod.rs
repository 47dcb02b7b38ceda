
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::{run, Cli, CliError};

fn core_fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Parses `args` as the binary would and runs the command, capturing stdout.
fn invoke(args: &[&str]) -> (Result<(), CliError>, String) {
    let cli = Cli::try_parse_from(std::iter::once("toporesolve").chain(args.iter().copied())).expect("valid usage");
    let mut out = Vec::new();
    let result = run(cli.command, &mut out);
    (result, String::from_utf8(out).unwrap())
}

fn usage_error(args: &[&str]) -> clap::Error {
    Cli::try_parse_from(std::iter::once("toporesolve").chain(args.iter().copied())).unwrap_err()
}
