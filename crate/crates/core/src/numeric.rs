//! Two-tier numeric values: exact rationals, falling back to a
//! high-precision binary float only when a result is not representable
//! (irrational roots, logarithms, trigonometry, π).
//!
//! Exact values never degrade on `+ - * /` or integer powers. Comparisons
//! involving an approximate operand use a relative tolerance from
//! [`NumericConfig`].

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative base raised to a non-integer exponent")]
    NegativeBaseRationalExponent,
    #[error("{0} is undefined for this argument")]
    Domain(&'static str),
    #[error("malformed numeric literal `{0}`")]
    Malformed(String),
}

/// Working precision and comparison tolerances for approximate values.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericConfig {
    /// Mantissa bits. 192 bits is about 57 significant decimal digits.
    pub precision_bits: usize,
    /// Relative tolerance for comparisons involving an approximate value.
    pub rel_tolerance: f64,
    /// Absolute floor below which two approximate values compare equal.
    pub abs_floor: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            precision_bits: 192,
            rel_tolerance: 1e-30,
            abs_floor: 1e-40,
        }
    }
}

impl NumericConfig {
    /// Decimal digits printed for approximate values.
    pub const DISPLAY_DIGITS: usize = 50;
}

/// An inexact value carried at a fixed binary precision.
#[derive(Debug, Clone)]
pub struct Approx {
    value: BigFloat,
    precision: usize,
}

impl Approx {
    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn precision(&self) -> usize {
        self.precision
    }
}

#[derive(Debug, Clone)]
pub enum NumericValue {
    Exact(BigRational),
    Approx(Approx),
}

impl NumericValue {
    pub fn zero() -> Self {
        NumericValue::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        NumericValue::Exact(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        NumericValue::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        NumericValue::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn exact(r: BigRational) -> Self {
        NumericValue::Exact(r)
    }

    /// Parses a decimal literal (`12`, `2.5`, `4e6`, `1.01e-3`) exactly.
    pub fn parse_decimal(text: &str) -> Result<Self, NumericError> {
        parse_decimal(text).map(NumericValue::Exact)
    }

    pub fn pi(cfg: &NumericConfig) -> Self {
        let p = cfg.precision_bits;
        NumericValue::Approx(Approx {
            value: with_consts(|cc| cc.pi(p, RM)),
            precision: p,
        })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NumericValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            NumericValue::Exact(r) => Some(r),
            NumericValue::Approx(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            NumericValue::Exact(r) => r.is_zero(),
            NumericValue::Approx(a) => a.value.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            NumericValue::Exact(r) => r.is_negative(),
            NumericValue::Approx(a) => a.value.is_negative() && !a.value.is_zero(),
        }
    }

    pub fn to_bigfloat(&self, precision: usize) -> BigFloat {
        match self {
            NumericValue::Exact(r) => rational_to_float(r, precision),
            NumericValue::Approx(a) => {
                let mut v = a.value.clone();
                let _ = v.set_precision(precision, RM);
                v
            }
        }
    }

    fn approx(value: BigFloat, precision: usize) -> Self {
        NumericValue::Approx(Approx { value, precision })
    }

    fn binary_approx(
        &self,
        other: &NumericValue,
        cfg: &NumericConfig,
        op: impl FnOnce(&BigFloat, &BigFloat, usize) -> BigFloat,
    ) -> NumericValue {
        let p = cfg.precision_bits;
        let v = op(&self.to_bigfloat(p), &other.to_bigfloat(p), p);
        NumericValue::approx(v, p)
    }

    pub fn add(&self, other: &NumericValue, cfg: &NumericConfig) -> NumericValue {
        match (self, other) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => NumericValue::Exact(a + b),
            _ => self.binary_approx(other, cfg, |a, b, p| a.add(b, p, RM)),
        }
    }

    pub fn sub(&self, other: &NumericValue, cfg: &NumericConfig) -> NumericValue {
        match (self, other) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => NumericValue::Exact(a - b),
            _ => self.binary_approx(other, cfg, |a, b, p| a.sub(b, p, RM)),
        }
    }

    pub fn mul(&self, other: &NumericValue, cfg: &NumericConfig) -> NumericValue {
        match (self, other) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => NumericValue::Exact(a * b),
            _ => self.binary_approx(other, cfg, |a, b, p| a.mul(b, p, RM)),
        }
    }

    pub fn div(
        &self,
        other: &NumericValue,
        cfg: &NumericConfig,
    ) -> Result<NumericValue, NumericError> {
        if other.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(match (self, other) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => NumericValue::Exact(a / b),
            _ => self.binary_approx(other, cfg, |a, b, p| a.div(b, p, RM)),
        })
    }

    pub fn neg(&self) -> NumericValue {
        match self {
            NumericValue::Exact(a) => NumericValue::Exact(-a),
            NumericValue::Approx(a) => NumericValue::approx(a.value.neg(), a.precision),
        }
    }

    pub fn abs(&self) -> NumericValue {
        match self {
            NumericValue::Exact(a) => NumericValue::Exact(a.abs()),
            NumericValue::Approx(a) => NumericValue::approx(a.value.abs(), a.precision),
        }
    }

    pub fn powi(&self, e: i64, cfg: &NumericConfig) -> Result<NumericValue, NumericError> {
        if e < 0 && self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let mag = e.unsigned_abs();
        match self {
            NumericValue::Exact(a) => {
                let mag = u32::try_from(mag).map_err(|_| NumericError::Domain("power"))?;
                let n = num_traits::pow(a.numer().clone(), mag as usize);
                let d = num_traits::pow(a.denom().clone(), mag as usize);
                let r = BigRational::new(n, d);
                Ok(NumericValue::Exact(if e < 0 { r.recip() } else { r }))
            }
            NumericValue::Approx(a) => {
                let p = cfg.precision_bits;
                let v = a.value.powi(mag as usize, p, RM);
                let v = if e < 0 {
                    BigFloat::from_u8(1, p).div(&v, p, RM)
                } else {
                    v
                };
                Ok(NumericValue::approx(v, p))
            }
        }
    }

    /// Raises to an exact rational power. Stays exact for integer exponents
    /// and for perfect roots of exact values.
    pub fn pow_rational(
        &self,
        e: &BigRational,
        cfg: &NumericConfig,
    ) -> Result<NumericValue, NumericError> {
        if e.is_integer() {
            let k = e
                .to_integer()
                .to_i64()
                .ok_or(NumericError::Domain("power"))?;
            return self.powi(k, cfg);
        }
        if self.is_negative() {
            return Err(NumericError::NegativeBaseRationalExponent);
        }
        if self.is_zero() {
            return if e.is_positive() {
                Ok(NumericValue::zero())
            } else {
                Err(NumericError::DivisionByZero)
            };
        }
        if let NumericValue::Exact(a) = self {
            if let Some(root) = exact_root(a, e.denom()) {
                let k = e.numer().to_i64().ok_or(NumericError::Domain("power"))?;
                return NumericValue::Exact(root).powi(k, cfg);
            }
        }
        let p = cfg.precision_bits;
        let base = self.to_bigfloat(p);
        let exp = rational_to_float(e, p);
        let v = with_consts(|cc| base.pow(&exp, p, RM, cc));
        Ok(NumericValue::approx(v, p))
    }

    /// `base ^ exponent` with a possibly inexact exponent.
    pub fn rpow(
        &self,
        exponent: &NumericValue,
        cfg: &NumericConfig,
    ) -> Result<NumericValue, NumericError> {
        match exponent {
            NumericValue::Exact(e) => self.pow_rational(e, cfg),
            NumericValue::Approx(e) => {
                if self.is_negative() {
                    return Err(NumericError::NegativeBaseRationalExponent);
                }
                if self.is_zero() {
                    return Ok(NumericValue::zero());
                }
                let p = cfg.precision_bits;
                let base = self.to_bigfloat(p);
                let v = with_consts(|cc| base.pow(&e.value, p, RM, cc));
                Ok(NumericValue::approx(v, p))
            }
        }
    }

    pub fn sqrt(&self, cfg: &NumericConfig) -> Result<NumericValue, NumericError> {
        self.pow_rational(&BigRational::new(1.into(), 2.into()), cfg)
    }

    pub fn ln(&self, cfg: &NumericConfig) -> Result<NumericValue, NumericError> {
        if self.is_negative() || self.is_zero() {
            return Err(NumericError::Domain("log"));
        }
        if let NumericValue::Exact(a) = self {
            if a.is_one() {
                return Ok(NumericValue::zero());
            }
        }
        let p = cfg.precision_bits;
        let x = self.to_bigfloat(p);
        Ok(NumericValue::approx(with_consts(|cc| x.ln(p, RM, cc)), p))
    }

    pub fn exp(&self, cfg: &NumericConfig) -> NumericValue {
        if let NumericValue::Exact(a) = self {
            if a.is_zero() {
                return NumericValue::one();
            }
        }
        let p = cfg.precision_bits;
        let x = self.to_bigfloat(p);
        NumericValue::approx(with_consts(|cc| x.exp(p, RM, cc)), p)
    }

    pub fn sin(&self, cfg: &NumericConfig) -> NumericValue {
        if self.is_zero() && self.is_exact() {
            return NumericValue::zero();
        }
        let p = cfg.precision_bits;
        let x = self.to_bigfloat(p);
        NumericValue::approx(with_consts(|cc| x.sin(p, RM, cc)), p)
    }

    pub fn cos(&self, cfg: &NumericConfig) -> NumericValue {
        if self.is_zero() && self.is_exact() {
            return NumericValue::one();
        }
        let p = cfg.precision_bits;
        let x = self.to_bigfloat(p);
        NumericValue::approx(with_consts(|cc| x.cos(p, RM, cc)), p)
    }

    /// Equality: exact when both sides are exact, tolerance-based otherwise.
    pub fn approx_eq(&self, other: &NumericValue, cfg: &NumericConfig) -> bool {
        match (self, other) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => a == b,
            _ => {
                let p = cfg.precision_bits;
                let a = self.to_bigfloat(p);
                let b = other.to_bigfloat(p);
                let diff = a.sub(&b, p, RM).abs();
                let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
                let tol = BigFloat::from_f64(cfg.rel_tolerance, p).mul(&scale, p, RM);
                let floor = BigFloat::from_f64(cfg.abs_floor, p);
                diff <= tol || diff <= floor
            }
        }
    }

    /// Ordering; approximately-equal approximate values compare `Equal`.
    pub fn compare(&self, other: &NumericValue, cfg: &NumericConfig) -> Ordering {
        match (self, other) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => a.cmp(b),
            _ => {
                if self.approx_eq(other, cfg) {
                    return Ordering::Equal;
                }
                let p = cfg.precision_bits;
                self.to_bigfloat(p)
                    .partial_cmp(&other.to_bigfloat(p))
                    .unwrap_or(Ordering::Equal)
            }
        }
    }

    /// Bit-for-bit identity (no tolerance). Used by determinism checks.
    pub fn identical(&self, other: &NumericValue) -> bool {
        match (self, other) {
            (NumericValue::Exact(a), NumericValue::Exact(b)) => a == b,
            (NumericValue::Approx(a), NumericValue::Approx(b)) => {
                a.precision == b.precision && a.value == b.value
            }
            _ => false,
        }
    }

    /// Rounded decimal text with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let p = match self {
            NumericValue::Approx(a) => a.precision,
            NumericValue::Exact(_) => 64 + digits * 4,
        };
        let x = self.to_bigfloat(p);
        float_to_decimal(&x, digits)
    }
}

impl PartialEq for NumericValue {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, &NumericConfig::default())
    }
}

impl fmt::Display for NumericValue {
    /// Exact terminating decimals print as decimals, other exact values as
    /// `p/q`, approximate values with 50 significant digits and a `~` prefix.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericValue::Exact(r) => match terminating_decimal(r) {
                Some(s) => f.write_str(&s),
                None => write!(f, "{}/{}", r.numer(), r.denom()),
            },
            NumericValue::Approx(_) => {
                write!(f, "~{}", self.to_decimal_string(NumericConfig::DISPLAY_DIGITS))
            }
        }
    }
}

impl From<BigRational> for NumericValue {
    fn from(r: BigRational) -> Self {
        NumericValue::Exact(r)
    }
}

impl From<Rational64> for NumericValue {
    fn from(r: Rational64) -> Self {
        NumericValue::ratio(*r.numer(), *r.denom())
    }
}

impl From<i64> for NumericValue {
    fn from(n: i64) -> Self {
        NumericValue::from_integer(n)
    }
}

fn parse_decimal(text: &str) -> Result<BigRational, NumericError> {
    let bad = || NumericError::Malformed(text.to_string());
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = text[i + 1..].parse().map_err(|_| bad())?;
            (&text[..i], e)
        }
        None => (text, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mag = u32::try_from(scale.unsigned_abs()).map_err(|_| bad())?;
    let p = num_traits::pow(ten, mag as usize);
    let r = if scale >= 0 {
        BigRational::from_integer(n * p)
    } else {
        BigRational::new(n, p)
    };
    Ok(if neg { -r } else { r })
}

/// Decimal expansion of `r` when its denominator has only factors 2 and 5.
pub fn terminating_decimal(r: &BigRational) -> Option<String> {
    let mut d = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    if places == 0 {
        return Some(n.to_string());
    }
    let neg = n.is_negative();
    let mut digits = n.abs().to_string();
    while digits.len() <= places {
        digits.insert(0, '0');
    }
    let split = digits.len() - places;
    Some(format!(
        "{}{}.{}",
        if neg { "-" } else { "" },
        &digits[..split],
        &digits[split..]
    ))
}

fn rational_to_float(r: &BigRational, p: usize) -> BigFloat {
    let n = bigint_to_float(r.numer(), p + 64);
    let d = bigint_to_float(r.denom(), p + 64);
    n.div(&d, p, RM)
}

fn bigint_to_float(n: &BigInt, p: usize) -> BigFloat {
    let text = n.to_string();
    with_consts(|cc| BigFloat::parse(&text, Radix::Dec, p, RoundingMode::None, cc))
}

/// Largest-magnitude exact `q`-th root of `a`, if one exists.
fn exact_root(a: &BigRational, q: &BigInt) -> Option<BigRational> {
    let q = q.to_u32()?;
    let n = a.numer();
    let d = a.denom();
    let rn = n.nth_root(q);
    let rd = d.nth_root(q);
    if num_traits::pow(rn.clone(), q as usize) == *n && num_traits::pow(rd.clone(), q as usize) == *d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

fn float_to_decimal(x: &BigFloat, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let text = with_consts(|cc| x.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
    round_sci(&text, digits).unwrap_or(text)
}

/// Rounds astro-float's `d.ddd…e±x` output to `digits` significant digits.
fn round_sci(text: &str, digits: usize) -> Option<String> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, text),
    };
    let (mant, exp) = body.split_once('e')?;
    let mut exp: i64 = exp.parse().ok()?;
    let mut ds: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    if ds.len() > digits {
        let round_up = ds[digits] >= 5;
        ds.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.truncate(digits);
                    exp += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && ds.last() == Some(&0) {
        ds.pop();
    }
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push((b'0' + ds[0]) as char);
    if ds.len() > 1 {
        s.push('.');
        s.extend(ds[1..].iter().map(|d| (b'0' + d) as char));
    }
    if exp != 0 {
        s.push_str(&format!("e{exp}"));
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    #[test]
    fn parses_decimals_exactly() {
        let v = NumericValue::parse_decimal("1.8").unwrap();
        assert_eq!(v.as_exact().unwrap(), &BigRational::new(9.into(), 5.into()));
        let v = NumericValue::parse_decimal("4e6").unwrap();
        assert_eq!(v.to_string(), "4000000");
        let v = NumericValue::parse_decimal("2.5e-3").unwrap();
        assert_eq!(v.to_string(), "0.0025");
        assert!(NumericValue::parse_decimal("1.2.3").is_err());
        assert!(NumericValue::parse_decimal("e5").is_err());
    }

    #[test]
    fn celsius_style_arithmetic_stays_exact() {
        let c = cfg();
        let a = NumericValue::parse_decimal("1.8").unwrap();
        let t = a
            .mul(&NumericValue::from_integer(15), &c)
            .add(&NumericValue::parse_decimal("273.15").unwrap(), &c);
        assert!(t.is_exact());
        assert_eq!(t.to_string(), "300.15");
    }

    #[test]
    fn rational_display_falls_back_to_fraction() {
        assert_eq!(NumericValue::ratio(1, 3).to_string(), "1/3");
        assert_eq!(NumericValue::ratio(-1, 8).to_string(), "-0.125");
        assert_eq!(NumericValue::ratio(23, 50).to_string(), "0.46");
    }

    #[test]
    fn perfect_roots_are_exact() {
        let c = cfg();
        let v = NumericValue::ratio(4, 9)
            .pow_rational(&BigRational::new(1.into(), 2.into()), &c)
            .unwrap();
        assert_eq!(v.as_exact().unwrap(), &BigRational::new(2.into(), 3.into()));
        let v = NumericValue::from_integer(8)
            .pow_rational(&BigRational::new((-2).into(), 3.into()), &c)
            .unwrap();
        assert_eq!(v.as_exact().unwrap(), &BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn cube_root_matches_independent_oracle() {
        // mpmath, 60 digits: cbrt(10832250/144739)
        let oracle = "4.2141601463216727073706759538156762898267809791540312120177";
        let v = NumericValue::ratio(10832250, 144739)
            .pow_rational(&BigRational::new(1.into(), 3.into()), &cfg())
            .unwrap();
        assert!(!v.is_exact());
        assert_eq!(
            v.to_decimal_string(50),
            "4.214160146321672707370675953815676289826780979154"
        );
        let o = NumericValue::parse_decimal(oracle).unwrap();
        assert!(v.approx_eq(&o, &cfg()));
    }

    #[test]
    fn negative_base_fractional_power_is_rejected() {
        let r = NumericValue::from_integer(-8)
            .pow_rational(&BigRational::new(1.into(), 3.into()), &cfg());
        assert_eq!(r.unwrap_err(), NumericError::NegativeBaseRationalExponent);
        let r = NumericValue::from_integer(-2).powi(3, &cfg()).unwrap();
        assert_eq!(r.to_string(), "-8");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = NumericValue::one().div(&NumericValue::zero(), &cfg());
        assert_eq!(r.unwrap_err(), NumericError::DivisionByZero);
    }

    #[test]
    fn transcendental_special_points_are_exact() {
        let c = cfg();
        assert!(NumericValue::zero().sin(&c).is_exact());
        assert!(NumericValue::zero().cos(&c).is_exact());
        assert!(NumericValue::one().ln(&c).unwrap().is_exact());
        assert!(NumericValue::zero().ln(&c).is_err());
    }

    #[test]
    fn sin_pi_is_zero_within_floor() {
        let c = cfg();
        let s = NumericValue::pi(&c).sin(&c);
        assert!(s.approx_eq(&NumericValue::zero(), &c));
    }

    #[test]
    fn tolerance_is_relative() {
        let c = cfg();
        let a = NumericValue::pi(&c);
        let eps = NumericValue::parse_decimal("1e-35").unwrap();
        assert!(a.approx_eq(&a.add(&eps, &c), &c));
        let eps = NumericValue::parse_decimal("1e-20").unwrap();
        assert!(!a.approx_eq(&a.add(&eps, &c), &c));
    }

    #[test]
    fn big_integers_convert_to_float() {
        let n = NumericValue::parse_decimal("123456789012345678901234567890").unwrap();
        assert_eq!(n.to_decimal_string(30), "1.2345678901234567890123456789e29");
    }
}
