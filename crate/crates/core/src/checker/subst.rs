//! Capture-avoiding rewriting of terms inside propositions.

use crate::lang::{Expr, Prop, PropKind};

/// Replaces every occurrence of `pat` in `e` by `rep`.
pub fn rewrite_expr(e: &Expr, pat: &Expr, rep: &Expr) -> Expr {
    if e == pat {
        return rep.clone();
    }
    let mut out = e.clone();
    for c in out.children_mut() {
        *c = rewrite_expr(c, pat, rep);
    }
    out
}

/// Rewrites `pat` to `rep` in `p`. A quantifier body is left alone when its
/// bound variable occurs in `pat` or `rep`.
pub fn rewrite_prop(p: &Prop, pat: &Expr, rep: &Expr) -> Prop {
    let r = |q: &Prop| Box::new(rewrite_prop(q, pat, rep));
    let kind = match &p.kind {
        PropKind::Eq(a, b) => PropKind::Eq(rewrite_expr(a, pat, rep), rewrite_expr(b, pat, rep)),
        PropKind::Le(a, b) => PropKind::Le(rewrite_expr(a, pat, rep), rewrite_expr(b, pat, rep)),
        PropKind::Lt(a, b) => PropKind::Lt(rewrite_expr(a, pat, rep), rewrite_expr(b, pat, rep)),
        PropKind::Ne(a, b) => PropKind::Ne(rewrite_expr(a, pat, rep), rewrite_expr(b, pat, rep)),
        PropKind::And(a, b) => PropKind::And(r(a), r(b)),
        PropKind::Or(a, b) => PropKind::Or(r(a), r(b)),
        PropKind::Implies(a, b) => PropKind::Implies(r(a), r(b)),
        PropKind::ForallFinite {
            var,
            kind,
            values,
            body,
        } => PropKind::ForallFinite {
            var: var.clone(),
            kind: kind.clone(),
            values: values.iter().map(|v| rewrite_expr(v, pat, rep)).collect(),
            body: if pat.mentions(var) || rep.mentions(var) {
                body.clone()
            } else {
                r(body)
            },
        },
        PropKind::ForallFn { var, kind, body } => PropKind::ForallFn {
            var: var.clone(),
            kind: kind.clone(),
            body: if pat.mentions(var) || rep.mentions(var) {
                body.clone()
            } else {
                r(body)
            },
        },
    };
    Prop::new(kind, p.span)
}

/// Instantiates a bound variable: `body[var := value]`.
pub fn instantiate(body: &Prop, var: &str, value: &Expr) -> Prop {
    rewrite_prop(body, &Expr::var(var), value)
}
