//! Units, prefixes, constants and kind aliases, with suggestions for typos.
//!
//! `cargo run -p physkernel --example unit_lookup`

use physkernel::unitdb::UnitDb;

fn main() {
    let db = UnitDb::shared();
    for name in ["newton", "joule", "electronvolt", "atmosphere"] {
        match db.lookup_unit(name) {
            Ok(q) => println!("{name:>12} = {} [{}]", q.val().to_decimal_string(25), q.dim),
            Err(e) => println!("{name:>12}: {e}"),
        }
    }
    let pf = db.lookup_unit("farad").and_then(|f| db.apply_prefix("pico", &f, &physkernel::numeric::NumericConfig::default())).unwrap();
    println!("  picofarad = {} [{}]", pf.val().to_decimal_string(25), pf.dim);

    for name in ["g", "K", "pi"] {
        let q = db.lookup_constant(name).unwrap();
        println!("{name:>12} = {} [{}]", q.val().to_decimal_string(25), q.dim);
    }
    println!("Pressure = {}", db.lookup_kind("Pressure").unwrap());

    for typo in ["newtn", "kilogramme"] {
        println!("{}", db.lookup_unit(typo).unwrap_err());
    }
    println!("{}", db.lookup_kind("Presure").unwrap_err());

    let custom = db
        .with_constant_overrides(&[("g".into(), num_rational::BigRational::new(981.into(), 100.into()))])
        .unwrap();
    println!("g overridden = {}", custom.lookup_constant("g").unwrap().val().to_decimal_string(10));
}
