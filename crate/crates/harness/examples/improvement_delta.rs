//! Per-model gain between two result tables, read two ways, plus the rows
//! whose printed overall does not match their own per-level counts.
//!
//! `cargo run -p physkernel-harness --example improvement_delta [results.json]`

use physkernel::numeric::terminating_decimal;
use physkernel_harness::rates::two_decimals;
use physkernel_harness::ResultTable;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/reference_results.json").into());
    let table = ResultTable::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();

    println!("overall cells as printed:");
    let printed = table.as_printed().unwrap();
    print!("{}", printed.render());
    println!("exact mean: {}", terminating_decimal(&printed.mean).unwrap());

    println!("\nwith the Qwen3-8B overall cells exchanged:");
    let swapped = table.with_overall_swapped("Qwen3-8B").unwrap();
    print!("{}", swapped.render());
    println!("exact mean: {}", terminating_decimal(&swapped.mean).unwrap());

    println!("\nrows whose overall is not the pooled per-level rate:");
    for (side, model) in table.inconsistent_rows() {
        let rows = if side == "with" { &table.with } else { &table.without };
        let r = rows.iter().find(|r| r.model == model).unwrap();
        let pooled = r.pooled();
        println!(
            "  {model} ({side}): printed {}, pooled {} = {}%",
            r.overall,
            pooled,
            two_decimals(&(pooled.rate() * num_rational::BigRational::from_integer(100.into())))
        );
    }
}
