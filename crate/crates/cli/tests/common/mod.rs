use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn core_fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn gazetteer_tsv() -> PathBuf {
    core_fixture("gazetteer.tsv")
}

pub fn toporesolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toporesolve"))
        .args(args)
        .env_remove("TOPORESOLVE_SNAPSHOT")
        .output()
        .expect("binary runs")
}

pub fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}
