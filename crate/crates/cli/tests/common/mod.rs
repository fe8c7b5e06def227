#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use latticeforge::{FormalContext, WordNetDb};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn context(name: &str) -> FormalContext {
    FormalContext::from_csv(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

/// A WordNet dictionary directory: `WNHOME`, a system install, or the
/// bundled noun/verb subset.
pub fn wordnet_dir() -> (PathBuf, bool) {
    let mut candidates: Vec<PathBuf> = Vec::new();
    if let Some(home) = std::env::var_os("WNHOME") {
        candidates.push(WordNetDb::locate(PathBuf::from(home)));
    }
    for dir in [
        "/usr/local/share/wordnet",
        "/usr/share/wordnet",
        "/usr/local/WordNet-3.0",
        "/opt/wordnet",
    ] {
        candidates.push(WordNetDb::locate(dir));
    }
    for dir in candidates {
        if dir.join("data.noun").is_file() && dir.join("noun.exc").is_file() {
            return (dir, true);
        }
    }
    (
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/wndb"),
        false,
    )
}

pub fn latticeforge() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_latticeforge"));
    cmd.env_remove("WNHOME").env_remove("RUST_LOG");
    cmd
}

pub fn run(args: &[&str]) -> Output {
    latticeforge().args(args).output().unwrap()
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}
