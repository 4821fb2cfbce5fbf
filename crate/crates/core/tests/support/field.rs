//! Field expressions, value-preserving rewrites and an exact evaluator.

use std::collections::BTreeMap;

use num_rational::Rational64;
use proptest::prelude::*;

use physkernel::checker::dims::DimEnv;
use physkernel::checker::{ring_equal, Env, Evaluator, RingOptions};
use physkernel::dimension::Dimension;
use physkernel::lang::{Expr, ExprKind};
use physkernel::numeric::{NumericConfig, NumericValue};
use physkernel::quantity::Quantity;
use physkernel::unitdb::UnitDb;

const VARS: [&str; 3] = ["a", "b", "c"];

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}
pub fn add(x: Expr, y: Expr) -> Expr {
    Expr::synth(ExprKind::Add(b(x), b(y)))
}
pub fn sub(x: Expr, y: Expr) -> Expr {
    Expr::synth(ExprKind::Sub(b(x), b(y)))
}
pub fn mul(x: Expr, y: Expr) -> Expr {
    Expr::synth(ExprKind::Mul(b(x), b(y)))
}
pub fn div(x: Expr, y: Expr) -> Expr {
    Expr::synth(ExprKind::Div(b(x), b(y)))
}
pub fn pow(x: Expr, n: i64) -> Expr {
    Expr::synth(ExprKind::Pow(b(x), Rational64::from_integer(n)))
}

pub fn field_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        3 => prop::sample::select(&VARS[..]).prop_map(Expr::var),
        1 => (1i64..6).prop_map(Expr::int),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| add(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| sub(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| mul(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| div(x, y)),
            (inner, -2i64..4).prop_map(|(x, n)| pow(x, n)),
        ]
    })
}

/// Rewrites the tree with identities that preserve its value wherever it is
/// defined. `choice` picks the rewrite at each node.
pub fn rewrite(e: &Expr, choice: &mut dyn Iterator<Item = u8>) -> Expr {
    let c = choice.next().unwrap_or(0);
    let r = rewrite;
    match &e.kind {
        ExprKind::Add(x, y) => match c % 3 {
            0 => add(r(y, choice), r(x, choice)),
            1 => sub(r(x, choice), mul(Expr::int(-1), r(y, choice))),
            _ => add(r(x, choice), r(y, choice)),
        },
        ExprKind::Sub(x, y) => match c % 2 {
            0 => add(r(x, choice), Expr::synth(ExprKind::Neg(b(r(y, choice))))),
            _ => sub(r(x, choice), r(y, choice)),
        },
        ExprKind::Mul(x, y) => match (c % 3, &y.kind) {
            (0, _) => mul(r(y, choice), r(x, choice)),
            (1, ExprKind::Add(p, q)) => {
                let x = r(x, choice);
                add(mul(x.clone(), r(p, choice)), mul(x, r(q, choice)))
            }
            _ => mul(r(x, choice), r(y, choice)),
        },
        ExprKind::Div(x, y) => match c % 3 {
            0 => mul(r(x, choice), pow(r(y, choice), -1)),
            1 => div(mul(r(x, choice), Expr::var("c")), mul(r(y, choice), Expr::var("c"))),
            _ => div(r(x, choice), r(y, choice)),
        },
        ExprKind::Pow(x, n) if *n == Rational64::from_integer(2) && c % 2 == 0 => {
            let x = r(x, choice);
            mul(x.clone(), x)
        }
        ExprKind::Pow(x, n) => Expr::synth(ExprKind::Pow(b(r(x, choice)), *n)),
        ExprKind::Var(_) if c % 4 == 0 => sub(add(e.clone(), Expr::var("b")), Expr::var("b")),
        _ => e.clone(),
    }
}

pub struct Oracle {
    dims: DimEnv,
    cfg: NumericConfig,
}

impl Oracle {
    pub fn new() -> Oracle {
        Oracle {
            dims: DimEnv {
                scalars: VARS
                    .iter()
                    .map(|v| (v.to_string(), Dimension::dimensionless()))
                    .collect(),
                functions: BTreeMap::new(),
            },
            cfg: NumericConfig::default(),
        }
    }

    /// Value at the point, or `None` where the expression is undefined.
    pub fn eval(&self, e: &Expr, point: &[(i64, i64); 3]) -> Option<NumericValue> {
        let mut env = Env::default();
        for (v, (n, d)) in VARS.iter().zip(point) {
            env.bind(v, Quantity::dimensionless(NumericValue::ratio(*n, *d)));
        }
        let ev = Evaluator::new(UnitDb::shared(), &self.dims, &self.cfg);
        ev.eval(e, &env).ok().map(|q| q.val().clone())
    }

    /// Agreement at every point where both sides are defined.
    pub fn agree(&self, l: &Expr, r: &Expr, points: &[[(i64, i64); 3]]) -> bool {
        points.iter().all(|p| match (self.eval(l, p), self.eval(r, p)) {
            (Some(x), Some(y)) => x.identical(&y),
            _ => true,
        })
    }
}

pub fn points() -> impl Strategy<Value = Vec<[(i64, i64); 3]>> {
    let q = (-30i64..30, 1i64..9);
    prop::collection::vec([q.clone(), q.clone(), q], 10)
}

pub fn ring(l: &Expr, r: &Expr) -> bool {
    ring_equal(l, r, UnitDb::shared(), RingOptions::default())
        .map(|p| p.is_some())
        .unwrap_or(false)
}
