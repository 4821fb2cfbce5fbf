//! Per-hypothesis dimension report, then the same statement with a bug planted.
//!
//! `cargo run -p physkernel --example dimension_report`

use physkernel::checker::check_dimensions;
use physkernel::lang::parse_statement;
use physkernel::unitdb::UnitDb;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/mechanics/ch2_q1.phys");
    let text = std::fs::read_to_string(path).unwrap();
    let stmt = parse_statement(&text).unwrap();
    let report = check_dimensions(&stmt, UnitDb::shared());
    print!("{}", report.render(Some(&text)));

    // Tension at the light end written as a mass.
    let broken = text.replace("T(0) = m * g", "T(0) = m");
    let stmt = parse_statement(&broken).unwrap();
    let report = check_dimensions(&stmt, UnitDb::shared());
    println!("\nafter dropping g:");
    print!("{}", report.render(Some(&broken)));
}
