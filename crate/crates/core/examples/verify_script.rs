//! Checks a hand-written derivation script step by step.
//!
//! `cargo run -p physkernel --example verify_script`

use physkernel::checker::{check_derivation, CheckerConfig, DerivationScript};
use physkernel::lang::parse_statement;
use physkernel::unitdb::UnitDb;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/mechanics/mechanics_73_university.phys");
    let stmt = parse_statement(&std::fs::read_to_string(path).unwrap()).unwrap();
    let cfg = CheckerConfig::default();
    for text in ["subst ha\nsubst hT\nsplit\nring\nring", "split\nring", "subst ha\nfrobnicate"] {
        println!("--- script:\n{text}");
        match text.parse::<DerivationScript>() {
            Ok(script) => {
                let v = check_derivation(&stmt, &script, UnitDb::shared(), &cfg).unwrap();
                print!("{}", v.render());
            }
            Err(e) => println!("script error: {e}"),
        }
    }
}
