//! Instantiates each proved golden statement at random rational points and
//! re-evaluates it with exact arithmetic.

use std::path::Path;

use physkernel::checker::{auto_prove, soundness_fuzz, CheckerConfig};
use physkernel::corpus::load_corpus;
use physkernel::unitdb::UnitDb;

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let db = UnitDb::shared();
    let cfg = CheckerConfig::default();
    for e in load_corpus(&root, db).unwrap_or_else(|e| panic!("{e}")) {
        if !auto_prove(&e.statement, db, &cfg).unwrap().is_proved() {
            continue;
        }
        let r = soundness_fuzz(&e.statement, db, &cfg, 100, 1).unwrap();
        println!(
            "{:<28} consistent {:>3}  rejected {:>3}  unevaluable {:>3}  falsified {}",
            e.name(),
            r.consistent,
            r.rejected,
            r.unevaluable,
            r.falsified.len()
        );
    }
}
