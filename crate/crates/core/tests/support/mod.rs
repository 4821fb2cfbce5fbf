//! Generators shared by the property suites.

#![allow(dead_code)]

pub mod field;
pub mod syntax;

use num_rational::Rational64;
use proptest::prelude::*;

use physkernel::dimension::Dimension;
use physkernel::numeric::NumericValue;

pub fn arb_dimension() -> impl Strategy<Value = Dimension> {
    proptest::array::uniform7((-12i64..=12, 1i64..=6).prop_map(|(n, d)| Rational64::new(n, d)))
        .prop_map(Dimension::from_exponents)
}

pub fn arb_int_dimension() -> impl Strategy<Value = Dimension> {
    proptest::array::uniform7(-3i64..=3).prop_map(Dimension::from_ints)
}

pub fn arb_value() -> impl Strategy<Value = NumericValue> {
    (-1000i64..1000, 1i64..50).prop_map(|(n, d)| NumericValue::ratio(n, d))
}
