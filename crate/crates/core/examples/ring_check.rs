//! Field-identity checks in value space, with the divisors they assume nonzero.
//!
//! `cargo run -p physkernel --example ring_check`

use physkernel::checker::{ring_equal, RingOptions};
use physkernel::lang::{parse_expr, print_expr, Scope};
use physkernel::unitdb::UnitDb;

fn main() {
    let db = UnitDb::shared();
    let mut scope = Scope::new();
    for v in ["m_1", "m_2", "x", "y"] {
        scope.push_scalar(v);
    }
    let pairs = [
        ("m_2 * g / (m_1 + m_2)", "m_2 / (m_1 + m_2) * g"),
        ("(x + y)^2", "x^2 + 2 * x * y + y^2"),
        ("x / y + 1", "(x + y) / y"),
        ("(x + y)^2", "x^2 + y^2"),
        ("sin(x)^2 + cos(x)^2", "1"),
    ];
    for (l, r) in pairs {
        let le = parse_expr(l, &scope, db).unwrap();
        let re = parse_expr(r, &scope, db).unwrap();
        match ring_equal(&le, &re, db, RingOptions::default()) {
            Ok(Some(proof)) => {
                let conds: Vec<String> = proof.side_conditions.iter().map(print_expr).collect();
                if conds.is_empty() {
                    println!("{l}  =  {r}");
                } else {
                    println!("{l}  =  {r}   [assuming {} ≠ 0]", conds.join(", "));
                }
            }
            Ok(None) => println!("{l}  ≠  {r}   [not a field identity]"),
            Err(e) => println!("{l}  ?  {r}   [{e}]"),
        }
    }
}
