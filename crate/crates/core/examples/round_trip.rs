//! Parse a statement, print it canonically, parse the output again.
//!
//! `cargo run -p physkernel --example round_trip -- corpus/thermodynamics/ch10_question_4.phys`

use physkernel::lang::{ast_eq, parse_statement, print_statement};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/thermodynamics/ch10_question_4.phys").into()
    });
    let text = std::fs::read_to_string(&path).expect("readable file");
    let stmt = parse_statement(&text).unwrap_or_else(|e| panic!("{path}:{e}"));
    let printed = print_statement(&stmt);
    print!("{printed}");
    let again = parse_statement(&printed).expect("printer output parses");
    println!("\nround trip preserves the tree: {}", ast_eq(&stmt, &again));
    println!("printing is a fixed point: {}", print_statement(&again) == printed);

    // Errors carry a position and what the parser wanted instead.
    let broken = printed.replacen(':', "", 1);
    if let Err(e) = parse_statement(&broken) {
        println!("with a colon dropped -> {e}");
    }
}
