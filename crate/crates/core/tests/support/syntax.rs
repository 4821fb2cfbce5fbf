//! Random syntax trees for round-trip tests.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

use physkernel::lang::{
    Decl, DeclKind, Expr, ExprKind, Func, Hypothesis,
    KindExpr, Metadata, Prop, PropKind, Span, Statement,
};

const SCALARS: [&str; 4] = ["x", "y", "t", "k"];

fn num() -> impl Strategy<Value = Expr> {
    (0i64..100_000, 0u32..4).prop_map(|(n, k)| {
        Expr::num(BigRational::new(BigInt::from(n), BigInt::from(10).pow(k)))
    })
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        4 => num(),
        4 => prop::sample::select(&SCALARS[..]).prop_map(Expr::var),
        1 => prop::sample::select(&["meter", "second", "newton", "kelvin"][..])
            .prop_map(|u| Expr::synth(ExprKind::Unit(u.into()))),
        1 => prop::sample::select(&["g", "pi", "K"][..])
            .prop_map(|c| Expr::synth(ExprKind::Const(c.into()))),
        1 => Just(Expr::synth(ExprKind::StandardUnit)),
    ]
}

fn kind() -> impl Strategy<Value = KindExpr> {
    prop_oneof![
        prop::sample::select(&["Length", "Force", "Real", "Speed"][..]).prop_map(KindExpr::name),
        Just(KindExpr::Div(
            Box::new(KindExpr::name("Force")),
            Box::new(KindExpr::name("Charge"))
        )),
    ]
}

pub fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(8, 64, 2, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::synth(ExprKind::Add(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::synth(ExprKind::Sub(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::synth(ExprKind::Mul(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::synth(ExprKind::Div(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::synth(ExprKind::SMul(b(x), b(y)))),
            inner.clone().prop_map(move |x| Expr::synth(ExprKind::Neg(b(x)))),
            (inner.clone(), prop::sample::select(vec![(2, 1), (3, 1), (-1, 1), (-2, 1), (1, 2), (1, 3), (-3, 2)]))
                .prop_map(move |(x, (n, d))| Expr::synth(ExprKind::Pow(b(x), Rational64::new(n, d)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::synth(ExprKind::RPow(b(x), b(y)))),
            (inner.clone(), kind()).prop_map(move |(x, k)| Expr::synth(ExprKind::Cast(b(x), k))),
            inner.clone().prop_map(move |x| Expr::synth(ExprKind::Val(b(x)))),
            inner.clone().prop_map(move |x| Expr::synth(ExprKind::Norm(b(x)))),
            (inner.clone(), prop::sample::select(Func::ALL.to_vec()))
                .prop_map(move |(x, f)| Expr::synth(ExprKind::Fn(f, b(x)))),
            (inner.clone(), prop::sample::select(&["nano", "milli", "kilo"][..]))
                .prop_map(move |(x, p)| Expr::synth(ExprKind::Prefix(p.into(), b(x)))),
            inner.clone().prop_map(move |x| Expr::synth(ExprKind::Apply("f".into(), b(x)))),
            inner.prop_map(move |x| Expr::synth(ExprKind::Deriv("f".into(), b(x)))),
        ]
    })
}

fn prop_tree() -> impl Strategy<Value = Prop> {
    let atom = (expr(), expr(), 0..4u8).prop_map(|(a, b, r)| {
        Prop::synth(match r {
            0 => PropKind::Eq(a, b),
            1 => PropKind::Le(a, b),
            2 => PropKind::Lt(a, b),
            _ => PropKind::Ne(a, b),
        })
    });
    atom.prop_recursive(3, 8, 2, |inner| {
        let b = |p: Prop| Box::new(p);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(p, q)| Prop::synth(PropKind::And(b(p), b(q)))),
            (inner.clone(), inner.clone()).prop_map(move |(p, q)| Prop::synth(PropKind::Or(b(p), b(q)))),
            (inner.clone(), inner.clone()).prop_map(move |(p, q)| Prop::synth(PropKind::Implies(b(p), b(q)))),
            inner.clone().prop_map(move |p| Prop::synth(PropKind::ForallFinite {
                var: "s".into(),
                kind: Some(KindExpr::name("Int")),
                values: vec![Expr::int(1), Expr::synth(ExprKind::Neg(Box::new(Expr::int(1))))],
                body: b(p),
            })),
            inner.prop_map(move |p| Prop::synth(PropKind::ForallFn {
                var: "s".into(),
                kind: Some(KindExpr::name("Time")),
                body: b(p),
            })),
        ]
    })
}

fn decl(name: &str, kind: DeclKind) -> Decl {
    Decl {
        name: name.into(),
        kind,
        default: None,
        span: Span::default(),
    }
}

pub fn statement() -> impl Strategy<Value = Statement> {
    (prop::collection::vec(prop_tree(), 0..3), prop_tree()).prop_map(|(hyps, goal)| {
        let mut decls: Vec<Decl> = SCALARS
            .iter()
            .map(|v| decl(v, DeclKind::Scalar(KindExpr::name("Length"))))
            .collect();
        decls.push(decl(
            "f",
            DeclKind::Function(KindExpr::name("Time"), KindExpr::name("Length")),
        ));
        Statement {
            name: "generated".into(),
            meta: Metadata::default(),
            decls,
            hyps: hyps
                .into_iter()
                .enumerate()
                .map(|(i, prop)| Hypothesis {
                    name: format!("h{i}"),
                    prop,
                    span: Span::default(),
                })
                .collect(),
            goal,
        }
    })
}
