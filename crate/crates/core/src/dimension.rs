//! Exact dimension algebra over the seven SI base dimensions.
//!
//! A [`Dimension`] is a vector of reduced rational exponents. Combining two
//! dimensions (the dimension of a product) adds exponents, inverting negates
//! them, and raising a quantity to a rational power scales them. The
//! dimensionless element is the all-zero vector.
//!
//! Storage order is fixed by [`BaseDim::ALL`]:
//! Time, Length, Mass, Current, Temperature, Amount, LuminousIntensity.
//! The text rendering uses the conventional `M L T I Θ N J` symbol order
//! instead, e.g. `M^1 L^2 T^-3 I^-1` for the volt.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimensionError {
    #[error("dimension exponent overflow")]
    Overflow,
    #[error("malformed dimension text `{0}`")]
    Malformed(String),
}

/// The seven SI base dimensions. The discriminant is the vector index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseDim {
    Time = 0,
    Length = 1,
    Mass = 2,
    Current = 3,
    Temperature = 4,
    Amount = 5,
    LuminousIntensity = 6,
}

impl BaseDim {
    pub const ALL: [BaseDim; 7] = [
        BaseDim::Time,
        BaseDim::Length,
        BaseDim::Mass,
        BaseDim::Current,
        BaseDim::Temperature,
        BaseDim::Amount,
        BaseDim::LuminousIntensity,
    ];

    /// Symbol order used by the text rendering.
    const RENDER_ORDER: [BaseDim; 7] = [
        BaseDim::Mass,
        BaseDim::Length,
        BaseDim::Time,
        BaseDim::Current,
        BaseDim::Temperature,
        BaseDim::Amount,
        BaseDim::LuminousIntensity,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BaseDim::Time => "T",
            BaseDim::Length => "L",
            BaseDim::Mass => "M",
            BaseDim::Current => "I",
            BaseDim::Temperature => "Θ",
            BaseDim::Amount => "N",
            BaseDim::LuminousIntensity => "J",
        }
    }

    fn from_symbol(s: &str) -> Option<BaseDim> {
        BaseDim::ALL.into_iter().find(|b| b.symbol() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Exponent vector over [`BaseDim::ALL`]. `Rational64` keeps every component
/// reduced with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dimension([Rational64; 7]);

impl Dimension {
    pub const fn dimensionless() -> Self {
        // Rational64::ZERO is not const-constructible through `new`, so build raw parts.
        Dimension([Rational64::new_raw(0, 1); 7])
    }

    /// Builds a dimension from integer exponents in storage order.
    pub fn from_ints(exps: [i64; 7]) -> Self {
        Dimension(exps.map(Rational64::from_integer))
    }

    pub fn from_exponents(exps: [Rational64; 7]) -> Self {
        Dimension(exps)
    }

    pub fn base(b: BaseDim) -> Self {
        let mut d = Self::dimensionless();
        d.0[b.index()] = Rational64::from_integer(1);
        d
    }

    pub fn exponent(&self, b: BaseDim) -> Rational64 {
        self.0[b.index()]
    }

    pub fn exponents(&self) -> &[Rational64; 7] {
        &self.0
    }

    pub fn is_dimensionless(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Exponent-wise sum: the dimension of a product.
    pub fn combine(&self, other: &Dimension) -> Result<Dimension, DimensionError> {
        let mut out = [Rational64::zero(); 7];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[i]
                .checked_add(&other.0[i])
                .ok_or(DimensionError::Overflow)?;
        }
        Ok(Dimension(out))
    }

    /// Exponent-wise difference: the dimension of a quotient.
    pub fn divide(&self, other: &Dimension) -> Result<Dimension, DimensionError> {
        let mut out = [Rational64::zero(); 7];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[i]
                .checked_sub(&other.0[i])
                .ok_or(DimensionError::Overflow)?;
        }
        Ok(Dimension(out))
    }

    pub fn invert(&self) -> Dimension {
        // Negating a reduced i64 ratio only fails for i64::MIN numerators,
        // which `Rational64` cannot produce from checked arithmetic anyway.
        Dimension(self.0.map(|e| -e))
    }

    pub fn scale(&self, q: Rational64) -> Result<Dimension, DimensionError> {
        let mut out = [Rational64::zero(); 7];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[i].checked_mul(&q).ok_or(DimensionError::Overflow)?;
        }
        Ok(Dimension(out))
    }
}

pub fn dim_combine(a: &Dimension, b: &Dimension) -> Result<Dimension, DimensionError> {
    a.combine(b)
}

pub fn dim_invert(a: &Dimension) -> Dimension {
    a.invert()
}

pub fn dim_scale(a: &Dimension, q: Rational64) -> Result<Dimension, DimensionError> {
    a.scale(q)
}

pub fn dim_eq(a: &Dimension, b: &Dimension) -> bool {
    a == b
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dimensionless() {
            return f.write_str("1");
        }
        let mut first = true;
        for b in BaseDim::RENDER_ORDER {
            let e = self.exponent(b);
            if e.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if e.is_integer() {
                write!(f, "{}^{}", b.symbol(), e.numer())?;
            } else {
                write!(f, "{}^{}/{}", b.symbol(), e.numer(), e.denom())?;
            }
        }
        Ok(())
    }
}

impl FromStr for Dimension {
    type Err = DimensionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut d = Dimension::dimensionless();
        if s == "1" {
            return Ok(d);
        }
        let bad = || DimensionError::Malformed(s.to_string());
        for tok in s.split_whitespace() {
            let (sym, exp) = tok.split_once('^').ok_or_else(bad)?;
            let base = BaseDim::from_symbol(sym).ok_or_else(bad)?;
            let exp = match exp.split_once('/') {
                Some((n, dn)) => {
                    let n: i64 = n.parse().map_err(|_| bad())?;
                    let dn: i64 = dn.parse().map_err(|_| bad())?;
                    if dn == 0 {
                        return Err(bad());
                    }
                    Rational64::new(n, dn)
                }
                None => Rational64::from_integer(exp.parse().map_err(|_| bad())?),
            };
            if !d.0[base.index()].is_zero() || exp.is_zero() {
                return Err(bad());
            }
            d.0[base.index()] = exp;
        }
        Ok(d)
    }
}
