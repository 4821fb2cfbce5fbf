//! Field normalization of expressions in value space.
//!
//! Units become their scale factors and `StandardUnit` becomes 1; casts and
//! value projections are transparent. Variables, constants and any
//! transcendental, applied or differentiated subterm become atoms keyed by
//! their printed form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::poly::{Poly, RatFunc};
use crate::lang::{print_expr, Expr, ExprKind};
use crate::numeric::{NumericConfig, NumericValue};
use crate::unitdb::UnitDb;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("division by an expression that is identically zero: {0}")]
    DivisionByZero(String),
    #[error("unsupported node in ring normalization: {0}")]
    UnsupportedNode(String),
    #[error("unknown unit, prefix or constant `{0}`")]
    Unknown(String),
}

/// Atoms seen so far, numbered in order of first appearance.
#[derive(Debug, Clone, Default)]
pub struct Atoms {
    keys: Vec<String>,
    exprs: Vec<Expr>,
    index: BTreeMap<String, usize>,
}

impl Atoms {
    pub fn new() -> Atoms {
        Atoms::default()
    }

    pub fn intern(&mut self, e: &Expr) -> usize {
        let key = print_expr(e);
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.keys.len();
        self.index.insert(key.clone(), i);
        self.keys.push(key);
        let mut e = e.clone();
        e.strip_spans();
        self.exprs.push(e);
        i
    }

    pub fn get(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn expr(&self, i: usize) -> &Expr {
        &self.exprs[i]
    }

    pub fn key(&self, i: usize) -> &str {
        &self.keys[i]
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingOptions {
    /// Treat transcendental and opaque subterms as atoms. When off they are
    /// rejected with [`RingError::UnsupportedNode`].
    pub opaque_atoms: bool,
}

impl Default for RingOptions {
    fn default() -> Self {
        RingOptions { opaque_atoms: true }
    }
}

/// Converts expressions, collecting atoms and the divisors that must be
/// nonzero for the normal form to be valid.
pub struct Normalizer<'a> {
    pub db: &'a UnitDb,
    pub atoms: Atoms,
    pub opts: RingOptions,
    /// Printed divisors, in order of first appearance.
    pub divisors: Vec<Expr>,
}

impl<'a> Normalizer<'a> {
    pub fn new(db: &'a UnitDb, opts: RingOptions) -> Self {
        Normalizer {
            db,
            atoms: Atoms::new(),
            opts,
            divisors: Vec::new(),
        }
    }

    fn opaque(&mut self, e: &Expr) -> Result<RatFunc, RingError> {
        if !self.opts.opaque_atoms {
            return Err(RingError::UnsupportedNode(print_expr(e)));
        }
        Ok(RatFunc::var(self.atoms.intern(e)))
    }

    fn note_divisor(&mut self, e: &Expr, r: &RatFunc) {
        if r.as_constant().is_some() {
            return;
        }
        let key = print_expr(e);
        if !self.divisors.iter().any(|d| print_expr(d) == key) {
            let mut e = e.clone();
            e.strip_spans();
            self.divisors.push(e);
        }
    }

    pub fn convert(&mut self, e: &Expr) -> Result<RatFunc, RingError> {
        use ExprKind::*;
        Ok(match &e.kind {
            Num(r) => RatFunc::constant(r.clone()),
            Const(_) | Var(_) => RatFunc::var(self.atoms.intern(e)),
            Unit(u) => {
                let def = self.db.unit(u).ok_or_else(|| RingError::Unknown(u.clone()))?;
                RatFunc::constant(def.scale.clone())
            }
            StandardUnit => RatFunc::constant(BigRational::one()),
            Prefix(p, a) => {
                let def = self.db.prefix(p).ok_or_else(|| RingError::Unknown(p.clone()))?;
                RatFunc::constant(def.factor()).mul(&self.convert(a)?)
            }
            Add(a, b) => self.convert(a)?.add(&self.convert(b)?),
            Sub(a, b) => self.convert(a)?.sub(&self.convert(b)?),
            Mul(a, b) | SMul(a, b) => self.convert(a)?.mul(&self.convert(b)?),
            Div(a, b) => {
                let x = self.convert(a)?;
                let y = self.convert(b)?;
                self.note_divisor(b, &y);
                x.div(&y)
                    .map_err(|_| RingError::DivisionByZero(print_expr(b)))?
            }
            Neg(a) => self.convert(a)?.neg(),
            Pow(a, q) => {
                let base = self.convert(a)?;
                if q.is_integer() {
                    if q.is_negative() {
                        self.note_divisor(a, &base);
                    }
                    base.powi(*q.numer())
                        .map_err(|_| RingError::DivisionByZero(print_expr(a)))?
                } else if let Some(c) = base.as_constant().and_then(|c| exact_root(&c, *q)) {
                    RatFunc::constant(c)
                } else {
                    self.opaque(e)?
                }
            }
            RPow(a, b) => {
                let base = self.convert(a)?.as_constant();
                let exp = self.convert(b)?.as_constant();
                match (base, exp) {
                    (Some(x), Some(y)) => match exact_rpow(&x, &y) {
                        Some(c) => RatFunc::constant(c),
                        None => self.opaque(e)?,
                    },
                    _ => self.opaque(e)?,
                }
            }
            Cast(a, _) | Val(a) => self.convert(a)?,
            Norm(_) | Fn(..) | Apply(..) | Deriv(..) => self.opaque(e)?,
        })
    }

    /// Expression for a polynomial over the current atoms, with every atom
    /// wrapped in `val(..)` so the result is dimensionless.
    pub fn poly_expr(&self, p: &Poly) -> Expr {
        poly_to_expr(p, &|i| {
            Expr::synth(ExprKind::Val(Box::new(self.atoms.expr(i).clone())))
        })
    }

    pub fn ratfunc_expr(&self, r: &RatFunc) -> Expr {
        let n = self.poly_expr(&r.num);
        if r.den == Poly::one() {
            n
        } else {
            Expr::synth(ExprKind::Div(Box::new(n), Box::new(self.poly_expr(&r.den))))
        }
    }
}

fn exact_root(c: &BigRational, q: Rational64) -> Option<BigRational> {
    let exp = BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()));
    NumericValue::exact(c.clone())
        .pow_rational(&exp, &NumericConfig::default())
        .ok()
        .and_then(|v| v.as_exact().cloned())
}

fn exact_rpow(x: &BigRational, y: &BigRational) -> Option<BigRational> {
    let cfg = NumericConfig::default();
    NumericValue::exact(x.clone())
        .rpow(&NumericValue::exact(y.clone()), &cfg)
        .ok()
        .and_then(|v| v.as_exact().cloned())
}

/// Builds `c₁·m₁ + c₂·m₂ + …`, highest term first.
pub fn poly_to_expr(p: &Poly, atom: &dyn Fn(usize) -> Expr) -> Expr {
    let mut acc: Option<Expr> = None;
    for (m, c) in p.terms().rev() {
        let mut factors: Vec<Expr> = Vec::new();
        for (i, e) in m.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let a = atom(i);
            factors.push(if *e == 1 {
                a
            } else {
                Expr::synth(ExprKind::Pow(Box::new(a), Rational64::from_integer(*e as i64)))
            });
        }
        let mag = c.abs();
        let mut term = if factors.is_empty() || !mag.is_one() {
            Some(Expr::num(mag))
        } else {
            None
        };
        for f in factors {
            term = Some(match term {
                None => f,
                Some(t) => Expr::synth(ExprKind::Mul(Box::new(t), Box::new(f))),
            });
        }
        let term = term.expect("nonempty term");
        acc = Some(match acc {
            None if c.is_negative() => Expr::synth(ExprKind::Neg(Box::new(term))),
            None => term,
            Some(a) if c.is_negative() => Expr::synth(ExprKind::Sub(Box::new(a), Box::new(term))),
            Some(a) => Expr::synth(ExprKind::Add(Box::new(a), Box::new(term))),
        });
    }
    acc.unwrap_or_else(|| Expr::num(BigRational::zero()))
}

/// Outcome of a successful field identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingProof {
    /// Divisors and cancelled factors that must be nonzero.
    pub side_conditions: Vec<Expr>,
}

/// Decides `lhs = rhs` as a field identity in value space.
pub fn ring_equal(
    lhs: &Expr,
    rhs: &Expr,
    db: &UnitDb,
    opts: RingOptions,
) -> Result<Option<RingProof>, RingError> {
    let mut n = Normalizer::new(db, opts);
    let a = n.convert(lhs)?;
    let b = n.convert(rhs)?;
    Ok(a.sub(&b).is_zero().then(|| RingProof {
        side_conditions: n.divisors,
    }))
}
