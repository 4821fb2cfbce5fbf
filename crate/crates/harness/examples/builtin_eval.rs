//! Evaluates the built-in prover over the golden corpus and prints the
//! report and the attempt log.
//!
//! `cargo run -p physkernel-harness --example builtin_eval`

use physkernel::corpus::load_corpus;
use physkernel::unitdb::UnitDb;
use physkernel_harness::{render_report, run_eval, EvalOptions, ProverBinding};

fn main() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus");
    let corpus = load_corpus(root.as_ref(), UnitDb::shared()).unwrap_or_else(|e| panic!("{e}"));
    let out = run_eval(&corpus, &ProverBinding::Builtin, &EvalOptions::default()).unwrap();
    print!("{}", render_report(&out.report));
    println!();
    for r in &out.records {
        println!("{:<28} {:<10} {}", r.entry, r.verdict, r.detail);
    }
}
