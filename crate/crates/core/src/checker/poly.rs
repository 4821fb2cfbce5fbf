//! Sparse multivariate polynomials over ℚ and their quotients in canonical
//! form.
//!
//! Monomials are exponent vectors indexed by atom number, with trailing
//! zeros trimmed, so `BTreeMap` order is lexicographic order and the last
//! term is the leading one. Gcds come from a recursive primitive
//! pseudo-remainder sequence.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

/// `a / b` when every exponent of `b` is at most that of `a`.
fn mono_div(a: &[u32], b: &[u32]) -> Option<Monomial> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = a.to_vec();
    for (i, e) in b.iter().enumerate() {
        out[i] = out[i].checked_sub(*e)?;
    }
    Some(trim(out))
}

fn exp_of(m: &[u32], v: usize) -> u32 {
    m.get(v).copied().unwrap_or(0)
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(i, e)| if *e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                    .collect();
                if vars.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn var(i: usize) -> Poly {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        let mut p = Poly::zero();
        p.terms.insert(m, BigRational::one());
        p
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(trim(m), c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// The constant value, when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                r.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Highest variable index present, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.len().checked_sub(1)).max()
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn mentions(&self, v: usize) -> bool {
        self.terms.keys().any(|m| exp_of(m, v) > 0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| exp_of(m, v)).max().unwrap_or(0)
    }

    /// Coefficient of `x_v^k`, a polynomial free of `x_v`.
    pub fn coeff_in(&self, v: usize, k: u32) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            if exp_of(m, v) == k {
                let mut m2 = m.clone();
                if v < m2.len() {
                    m2[v] = 0;
                }
                r.add_term(trim(m2), c.clone());
            }
        }
        r
    }

    fn times_var_pow(&self, v: usize, k: u32) -> Poly {
        let mut m = vec![0; v + 1];
        m[v] = k;
        self.mul(&Poly::monomial(m, BigRational::one()))
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let m = mono_div(rm, &dm)?;
            let c = rc / &dc;
            let t = Poly::monomial(m, c);
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Scaled so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Content with respect to `x_v` (the gcd of its coefficients) and the
    /// primitive part.
    fn content_primitive(&self, v: usize) -> (Poly, Poly) {
        let mut c = Poly::zero();
        for k in 0..=self.degree_in(v) {
            let coeff = self.coeff_in(v, k);
            if !coeff.is_zero() {
                c = gcd(&c, &coeff);
                if c.is_constant() {
                    break;
                }
            }
        }
        if c.is_zero() {
            return (Poly::zero(), Poly::zero());
        }
        let p = self.div_exact(&c).expect("content divides");
        (c, p)
    }

    fn prem(&self, g: &Poly, v: usize) -> Poly {
        let dg = g.degree_in(v);
        let lg = g.coeff_in(v, dg);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= dg {
            let dr = r.degree_in(v);
            let lr = r.coeff_in(v, dr);
            r = r.mul(&lg).sub(&lr.mul(g).times_var_pow(v, dr - dg));
        }
        r
    }

    /// Substitutes exact values for some variables.
    pub fn eval_partial(&self, assign: &BTreeMap<usize, BigRational>) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = m.clone();
            for (i, e) in m.iter().enumerate() {
                if let Some(x) = assign.get(&i) {
                    coeff *= num_traits::pow(x.clone(), *e as usize);
                    rest[i] = 0;
                }
            }
            r.add_term(trim(rest), coeff);
        }
        r
    }

    /// Multiplies by the lcm of coefficient denominators and divides by the
    /// gcd of numerators, keeping the sign of the leading coefficient.
    pub fn integer_primitive(&self) -> Poly {
        use num_integer::Integer;
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
            g = g.gcd(c.numer());
        }
        if g.is_zero() {
            return Poly::zero();
        }
        let mut f = BigRational::new(l, g);
        if self.leading_coeff().is_negative() {
            f = -f;
        }
        self.scale(&f)
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let Some(v) = a.max_var().into_iter().chain(b.max_var()).max() else {
        return Poly::one();
    };
    let (ca, pa) = a.content_primitive(v);
    let (cb, pb) = b.content_primitive(v);
    let c = gcd(&ca, &cb);
    let (mut f, mut g) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    while !g.is_zero() && g.mentions(v) {
        let r = f.prem(&g, v);
        f = g;
        g = if r.is_zero() {
            r
        } else {
            r.content_primitive(v).1
        };
    }
    // A nonzero remainder free of v means the primitive parts are coprime.
    let h = if g.is_zero() { f } else { Poly::one() };
    let h = if h.mentions(v) {
        h.content_primitive(v).1
    } else {
        Poly::one()
    };
    c.mul(&h).monic()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("division by an identically zero expression")]
pub struct ZeroDenominator;

/// `num / den` with no common factor and a monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc, ZeroDenominator> {
        if den.is_zero() {
            return Err(ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc::constant(BigRational::zero()));
        }
        let g = gcd(&num, &den);
        let (n, d) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = d.leading_coeff().recip();
        Ok(RatFunc {
            num: n.scale(&lc),
            den: d.scale(&lc),
        })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: BigRational) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn var(i: usize) -> RatFunc {
        RatFunc::from_poly(Poly::var(i))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).expect("nonzero");
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, ZeroDenominator> {
        if o.is_zero() {
            return Err(ZeroDenominator);
        }
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn powi(&self, n: i64) -> Result<RatFunc, ZeroDenominator> {
        let k = n.unsigned_abs() as u32;
        let r = RatFunc {
            num: self.num.pow(k),
            den: self.den.pow(k),
        };
        if n >= 0 {
            Ok(r)
        } else {
            RatFunc::constant(BigRational::one()).div(&r)
        }
    }
}
