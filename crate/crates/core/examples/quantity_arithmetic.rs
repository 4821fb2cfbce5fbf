//! Dimension-checked arithmetic on exact quantities.
//!
//! `cargo run -p physkernel --example quantity_arithmetic`

use physkernel::numeric::{NumericConfig, NumericValue};
use physkernel::quantity::Quantity;
use physkernel::unitdb::UnitDb;

fn main() {
    let db = UnitDb::shared();
    let cfg = NumericConfig::default();

    let mass = Quantity::new(NumericValue::from_integer(3), db.lookup_kind("Mass").unwrap());
    let g = db.lookup_constant("g").unwrap();
    let weight = mass.mul(&g, &cfg).unwrap();
    println!("3 kg * g = {} [{}]", weight.val().to_decimal_string(20), weight.dim);

    let force = db.lookup_kind("Force").unwrap();
    println!("weight is a force: {}", weight.dim == force);

    // Adding a mass to a force is refused rather than silently summed.
    match weight.add(&mass, &cfg) {
        Ok(q) => println!("unexpected sum {}", q.val().to_decimal_string(20)),
        Err(e) => println!("weight + mass: {e}"),
    }

    // Values stay rational until an irrational operation forces a float.
    let third = Quantity::dimensionless(NumericValue::ratio(1, 3));
    let sum = third.add(&third, &cfg).unwrap().add(&third, &cfg).unwrap();
    println!("1/3 + 1/3 + 1/3 exact: {} = {}", sum.val().is_exact(), sum.val().to_decimal_string(10));
    let root = NumericValue::from_integer(2).sqrt(&cfg).unwrap();
    println!("sqrt 2 = {} (exact: {})", root.to_decimal_string(50), root.is_exact());

    let area = Quantity::new(NumericValue::from_integer(16), db.lookup_kind("Area").unwrap());
    let side = area.pow(num_rational::Rational64::new(1, 2), &cfg).unwrap();
    println!("sqrt(16 m^2) = {} [{}]", side.val().to_decimal_string(10), side.dim);
}
