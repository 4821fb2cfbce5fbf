//! Dimensioned scalar quantities.
//!
//! A [`Quantity`] pairs a [`NumericValue`] with a [`Dimension`]. Sums require
//! equal dimensions; products combine them. The value projection
//! ([`Quantity::val`]) strips the dimension, which is how statements move
//! between physical quantities and plain numbers.
//!
//! Division by a zero quantity is an error. Proof assistants with total
//! division define `x / 0 = 0`; this kernel does not, so a derivation that
//! leans on that convention will be rejected here.

use std::fmt;

use num_rational::{BigRational, Rational64};
use thiserror::Error;

use crate::dimension::{Dimension, DimensionError};
use crate::numeric::{NumericConfig, NumericError, NumericValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantityError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch {
        expected: Dimension,
        found: Dimension,
    },
    #[error("invalid cast from {from} to {to}")]
    InvalidCast { from: Dimension, to: Dimension },
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

impl QuantityError {
    pub fn is_division_by_zero(&self) -> bool {
        matches!(self, QuantityError::Numeric(NumericError::DivisionByZero))
    }
}

#[derive(Debug, Clone)]
pub struct Quantity {
    pub val: NumericValue,
    pub dim: Dimension,
}

impl Quantity {
    pub fn new(val: NumericValue, dim: Dimension) -> Self {
        Quantity { val, dim }
    }

    pub fn dimensionless(val: NumericValue) -> Self {
        Quantity::new(val, Dimension::dimensionless())
    }

    pub fn zero(dim: Dimension) -> Self {
        Quantity::new(NumericValue::zero(), dim)
    }

    /// The scale-1 quantity at `dim`.
    pub fn unit(dim: Dimension) -> Self {
        Quantity::new(NumericValue::one(), dim)
    }

    fn require_same_dim(&self, other: &Quantity) -> Result<(), QuantityError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(QuantityError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        }
    }

    pub fn add(&self, other: &Quantity, cfg: &NumericConfig) -> Result<Quantity, QuantityError> {
        self.require_same_dim(other)?;
        Ok(Quantity::new(self.val.add(&other.val, cfg), self.dim))
    }

    pub fn sub(&self, other: &Quantity, cfg: &NumericConfig) -> Result<Quantity, QuantityError> {
        self.require_same_dim(other)?;
        Ok(Quantity::new(self.val.sub(&other.val, cfg), self.dim))
    }

    pub fn neg(&self) -> Quantity {
        Quantity::new(self.val.neg(), self.dim)
    }

    pub fn mul(&self, other: &Quantity, cfg: &NumericConfig) -> Result<Quantity, QuantityError> {
        Ok(Quantity::new(
            self.val.mul(&other.val, cfg),
            self.dim.combine(&other.dim)?,
        ))
    }

    pub fn div(&self, other: &Quantity, cfg: &NumericConfig) -> Result<Quantity, QuantityError> {
        let dim = self.dim.divide(&other.dim)?;
        Ok(Quantity::new(self.val.div(&other.val, cfg)?, dim))
    }

    /// Scalar action `c • self`: scales the value, keeps the dimension.
    pub fn smul(&self, c: &NumericValue, cfg: &NumericConfig) -> Quantity {
        Quantity::new(c.mul(&self.val, cfg), self.dim)
    }

    pub fn pow(&self, e: Rational64, cfg: &NumericConfig) -> Result<Quantity, QuantityError> {
        let dim = self.dim.scale(e)?;
        let exp = BigRational::new((*e.numer()).into(), (*e.denom()).into());
        Ok(Quantity::new(self.val.pow_rational(&exp, cfg)?, dim))
    }

    /// Relabels the dimension. Only valid when the dimensions already agree;
    /// the value is untouched.
    pub fn cast(&self, target: &Dimension) -> Result<Quantity, QuantityError> {
        if self.dim == *target {
            Ok(Quantity::new(self.val.clone(), *target))
        } else {
            Err(QuantityError::InvalidCast {
                from: self.dim,
                to: *target,
            })
        }
    }

    pub fn val(&self) -> &NumericValue {
        &self.val
    }

    pub fn norm(&self) -> NumericValue {
        self.val.abs()
    }

    /// `val_inj`: same dimension and equal values.
    pub fn approx_eq(&self, other: &Quantity, cfg: &NumericConfig) -> bool {
        self.dim == other.dim && self.val.approx_eq(&other.val, cfg)
    }
}

impl PartialEq for Quantity {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, &NumericConfig::default())
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim.is_dimensionless() {
            write!(f, "{}", self.val)
        } else {
            write!(f, "{} [{}]", self.val, self.dim)
        }
    }
}

pub fn q_add(a: &Quantity, b: &Quantity, cfg: &NumericConfig) -> Result<Quantity, QuantityError> {
    a.add(b, cfg)
}

pub fn q_sub(a: &Quantity, b: &Quantity, cfg: &NumericConfig) -> Result<Quantity, QuantityError> {
    a.sub(b, cfg)
}

pub fn q_neg(a: &Quantity) -> Quantity {
    a.neg()
}

pub fn q_mul(a: &Quantity, b: &Quantity, cfg: &NumericConfig) -> Result<Quantity, QuantityError> {
    a.mul(b, cfg)
}

pub fn q_div(a: &Quantity, b: &Quantity, cfg: &NumericConfig) -> Result<Quantity, QuantityError> {
    a.div(b, cfg)
}

pub fn q_smul(c: &NumericValue, a: &Quantity, cfg: &NumericConfig) -> Quantity {
    a.smul(c, cfg)
}

pub fn q_pow(a: &Quantity, e: Rational64, cfg: &NumericConfig) -> Result<Quantity, QuantityError> {
    a.pow(e, cfg)
}

pub fn q_cast(a: &Quantity, target: &Dimension) -> Result<Quantity, QuantityError> {
    a.cast(target)
}

pub fn q_val(a: &Quantity) -> NumericValue {
    a.val.clone()
}

pub fn q_norm(a: &Quantity) -> NumericValue {
    a.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::BaseDim;
    use proptest::prelude::*;

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }
    fn newton() -> Dimension {
        Dimension::from_ints([-2, 1, 1, 0, 0, 0, 0])
    }
    fn charge() -> Dimension {
        Dimension::from_ints([1, 0, 0, 1, 0, 0, 0])
    }
    fn voltage() -> Dimension {
        Dimension::from_ints([-3, 2, 1, -1, 0, 0, 0])
    }
    fn farad() -> Dimension {
        Dimension::from_ints([4, -2, -1, 2, 0, 0, 0])
    }
    fn q(n: i64, d: i64, dim: Dimension) -> Quantity {
        Quantity::new(NumericValue::ratio(n, d), dim)
    }
    fn dec(s: &str, dim: Dimension) -> Quantity {
        Quantity::new(NumericValue::parse_decimal(s).unwrap(), dim)
    }

    #[test]
    fn self_cancellation() {
        let f = q(230, 1, newton());
        let z = q_sub(&f, &f, &cfg()).unwrap();
        assert!(z.val.is_zero());
        assert_eq!(z.dim, newton());
    }

    #[test]
    fn heterogeneous_sum_is_rejected() {
        let m = q(1, 1, Dimension::base(BaseDim::Length));
        let s = q(1, 1, Dimension::base(BaseDim::Time));
        assert!(matches!(
            q_add(&m, &s, &cfg()),
            Err(QuantityError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kelvin_from_celsius_style_literal() {
        let c = cfg();
        let k = Dimension::base(BaseDim::Temperature);
        let v = NumericValue::parse_decimal("1.8")
            .unwrap()
            .mul(&NumericValue::from_integer(15), &c)
            .add(&NumericValue::parse_decimal("273.15").unwrap(), &c);
        let t = q_smul(&v, &Quantity::unit(k), &c);
        assert!(t.val.is_exact());
        assert_eq!(t, dec("300.15", k));
    }

    #[test]
    fn products_and_quotients() {
        let c = cfg();
        let f = q(500, 1, newton());
        let one = q_div(&f, &f, &c).unwrap();
        assert!(one.dim.is_dimensionless());
        assert_eq!(one.val, NumericValue::one());

        let mass = q(9, 1, Dimension::base(BaseDim::Mass));
        let acc = q(2, 1, Dimension::from_ints([-2, 1, 0, 0, 0, 0, 0]));
        assert_eq!(q_mul(&mass, &acc, &c).unwrap(), q(18, 1, newton()));
    }

    #[test]
    fn capacitor_value_is_exact() {
        let c = cfg();
        let charge_q = dec("8e-8", charge());
        let field = dec("4e6", voltage().divide(&Dimension::base(BaseDim::Length)).unwrap());
        let gap = dec("2.5e-3", Dimension::base(BaseDim::Length));
        let cap = q_div(&charge_q, &q_mul(&field, &gap, &c).unwrap(), &c).unwrap();
        assert_eq!(cap.dim, farad());
        assert_eq!(cap.val.as_exact().unwrap(), &BigRational::new(1.into(), 125_000_000_000i64.into()));
    }

    #[test]
    fn zero_divisor_is_an_error() {
        let e = q_div(&q(1, 1, newton()), &Quantity::zero(newton()), &cfg()).unwrap_err();
        assert!(e.is_division_by_zero());
    }

    #[test]
    fn smul_examples() {
        let c = cfg();
        let coulomb = Quantity::unit(charge());
        assert_eq!(q_smul(&NumericValue::one(), &coulomb, &c), q(1, 1, charge()));
        let x = q(7, 3, newton());
        assert_eq!(q_smul(&NumericValue::zero(), &x, &c), Quantity::zero(newton()));
        let vol = Dimension::from_ints([0, 3, 0, 0, 0, 0, 0]);
        assert_eq!(
            q_smul(&NumericValue::from_integer(13), &Quantity::unit(vol), &c),
            q(13, 1, vol)
        );
    }

    #[test]
    fn pow_examples() {
        let c = cfg();
        let len = Dimension::base(BaseDim::Length);
        let sq = q_pow(&q(2, 1, len), Rational64::from_integer(2), &c).unwrap();
        assert_eq!(sq, q(4, 1, len.scale(Rational64::from_integer(2)).unwrap()));
        let x = q(5, 7, newton());
        assert_eq!(q_pow(&x, Rational64::from_integer(1), &c).unwrap(), x);

        let r = q_pow(
            &q(10832250, 144739, Dimension::dimensionless()),
            Rational64::new(1, 3),
            &c,
        )
        .unwrap();
        assert!(!r.val.is_exact());
        assert!(r.val.to_decimal_string(50).starts_with("4.21416014632167270737067595381567628982678097915"));

        let neg = q_pow(&q(-1, 1, len), Rational64::new(1, 2), &c);
        assert!(matches!(
            neg,
            Err(QuantityError::Numeric(NumericError::NegativeBaseRationalExponent))
        ));
    }

    #[test]
    fn cast_examples() {
        let c = cfg();
        let ratio = q_div(&q(8, 1, charge()), &q(2, 1, voltage()), &c).unwrap();
        let cast = q_cast(&ratio, &farad()).unwrap();
        assert_eq!(cast.dim, farad());
        assert!(cast.val.identical(&ratio.val));
        assert_eq!(q_cast(&cast, &farad()).unwrap(), cast);
        let m = q(1, 1, Dimension::base(BaseDim::Length));
        assert!(matches!(
            q_cast(&m, &Dimension::base(BaseDim::Time)),
            Err(QuantityError::InvalidCast { .. })
        ));
    }

    #[test]
    fn val_and_norm_examples() {
        assert_eq!(q_val(&q(230, 1, newton())), NumericValue::from_integer(230));
        let nano = NumericValue::parse_decimal("1e-9").unwrap();
        let x = q_smul(&nano, &q(-3, 1, charge()), &cfg());
        assert_eq!(q_norm(&x), NumericValue::parse_decimal("3e-9").unwrap());
        assert!(q_val(&Quantity::zero(newton())).is_zero());
    }

    fn arb_value() -> impl Strategy<Value = NumericValue> {
        (-1000i64..1000, 1i64..50).prop_map(|(n, d)| NumericValue::ratio(n, d))
    }
    fn arb_dim() -> impl Strategy<Value = Dimension> {
        proptest::array::uniform7(-3i64..=3).prop_map(Dimension::from_ints)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn val_is_a_homomorphism(a in arb_value(), b in arb_value(), c in arb_value(),
                                 da in arb_dim(), db in arb_dim()) {
            let cfg = cfg();
            let x = Quantity::new(a.clone(), da);
            let y = Quantity::new(b.clone(), db);
            let prod = q_mul(&x, &y, &cfg).unwrap();
            prop_assert!(q_val(&prod).identical(&a.mul(&b, &cfg)));
            let y_same = Quantity::new(b.clone(), da);
            let sum = q_add(&x, &y_same, &cfg).unwrap();
            prop_assert!(q_val(&sum).identical(&a.add(&b, &cfg)));
            prop_assert!(q_val(&q_smul(&c, &x, &cfg)).identical(&c.mul(&a, &cfg)));
            prop_assert!(q_val(&sum).is_exact());
        }

        #[test]
        fn val_injective_on_same_dimension(a in arb_value(), b in arb_value(), d in arb_dim()) {
            let x = Quantity::new(a.clone(), d);
            let y = Quantity::new(b.clone(), d);
            prop_assert_eq!(x == y, a == b);
        }

        #[test]
        fn cast_is_transparent(a in arb_value(), d in arb_dim()) {
            let x = Quantity::new(a, d);
            prop_assert!(q_val(&q_cast(&x, &d).unwrap()).identical(&q_val(&x)));
        }

        #[test]
        fn norm_properties(a in arb_value(), b in arb_value(), c in arb_value(), d in arb_dim()) {
            let cfg = cfg();
            let x = Quantity::new(a, d);
            let y = Quantity::new(b, d);
            let lhs = q_norm(&q_add(&x, &y, &cfg).unwrap());
            let rhs = q_norm(&x).add(&q_norm(&y), &cfg);
            prop_assert!(lhs.compare(&rhs, &cfg) != std::cmp::Ordering::Greater);
            prop_assert_eq!(q_norm(&q_smul(&c, &x, &cfg)), c.abs().mul(&q_norm(&x), &cfg));
        }
    }
}
