//! Runs the auto-prover over the golden corpus and prints each verdict.

use std::path::Path;

use physkernel::checker::{auto_prove, check_dimensions, CheckerConfig};
use physkernel::corpus::load_corpus;
use physkernel::unitdb::UnitDb;

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let db = UnitDb::shared();
    let corpus = load_corpus(&root, db).unwrap_or_else(|e| panic!("{e}"));
    let cfg = CheckerConfig::default();
    for entry in &corpus {
        let s = &entry.statement;
        let dims = check_dimensions(s, db);
        let verdict = auto_prove(s, db, &cfg).expect("checker error");
        println!(
            "{:<28} {:<17} dims={} -> {}",
            entry.name(),
            entry.expected,
            if dims.is_homogeneous() { "ok" } else { "MISMATCH" },
            verdict.label()
        );
    }
}
