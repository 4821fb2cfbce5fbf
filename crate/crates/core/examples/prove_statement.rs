//! Proves one `.phys` file and prints the verdict with its trace.
//!
//! `cargo run --example prove_statement -- corpus/mechanics/ch2_q32.phys`

use physkernel::checker::{auto_prove, CheckerConfig};
use physkernel::lang::parse_statement;
use physkernel::unitdb::UnitDb;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/mechanics/ch2_q32.phys").into());
    let text = std::fs::read_to_string(&path).expect("readable file");
    let stmt = parse_statement(&text).unwrap_or_else(|e| panic!("{path}:{e}"));
    let verdict = auto_prove(&stmt, UnitDb::shared(), &CheckerConfig::default()).expect("checker error");
    print!("{}", verdict.render());
}
