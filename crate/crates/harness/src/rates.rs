//! Exact pass rates and their two-decimal rendering.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Passes out of a total.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tally {
    pub passes: u64,
    pub total: u64,
}

impl Tally {
    pub fn new(passes: u64, total: u64) -> Tally {
        assert!(passes <= total, "{passes} passes out of {total}");
        Tally { passes, total }
    }

    /// `passes / total`, or zero for an empty tally.
    pub fn rate(&self) -> BigRational {
        if self.total == 0 {
            BigRational::zero()
        } else {
            BigRational::new(self.passes.into(), self.total.into())
        }
    }

    /// The rate as a percentage with two decimals, e.g. `14.50%`.
    pub fn percent(&self) -> String {
        format!("{}%", percent_digits(&self.rate()))
    }
}

impl Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally::new(self.passes + o.passes, self.total + o.total)
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.passes, self.total)
    }
}

/// Pooled total: the sums of passes and totals, not a mean of rates.
pub fn aggregate(parts: &[Tally]) -> Tally {
    parts.iter().copied().fold(Tally::default(), Add::add)
}

/// `x` rounded to two decimals, half away from zero.
pub fn two_decimals(x: &BigRational) -> String {
    let hundredths = x * BigRational::from_integer(100.into());
    let half = BigRational::new(1.into(), 2.into());
    let n: BigInt = (hundredths.abs() + half).floor().to_integer();
    let sign = if x.is_negative() && !n.is_zero() { "-" } else { "" };
    let whole = &n / 100;
    let frac: BigInt = &n % 100;
    format!("{sign}{whole}.{frac:0>2}")
}

/// A fraction rendered as a percentage without the sign.
pub fn percent_digits(r: &BigRational) -> String {
    two_decimals(&(r * BigRational::from_integer(100.into())))
}

/// Parses `14.50` or `14.50%` into an exact rational percentage.
pub fn parse_percent(s: &str) -> Option<BigRational> {
    let s = s.trim().trim_end_matches('%');
    let (neg, s) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let digits: String = format!("{int}{frac}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = digits.parse().ok()?;
    let r = BigRational::new(n, BigInt::from(10).pow(frac.len() as u32));
    Some(if neg { -r } else { r })
}
