//! Fixtures shared by the benchmarks in `benches/`.

use std::path::PathBuf;

use diaconf::rewrite::{Mode, RewritingSystem};
use diaconf::rulefile::parse_rule_file;

/// A system from the repository's `systems/` directory.
pub fn system(file: &str, mode: Option<Mode>) -> RewritingSystem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../systems").join(file);
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_rule_file(&src).unwrap().system(mode).unwrap()
}
