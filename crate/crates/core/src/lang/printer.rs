//! Canonical text form. Parentheses appear only where precedence needs
//! them, so printing normalizes redundant grouping.

use std::fmt::Write;

use num_rational::{BigRational, Rational64};
use num_traits::Signed;

use super::ast::*;
use crate::numeric::terminating_decimal;

pub fn print_statement(s: &Statement) -> String {
    let mut out = String::new();
    out.push_str("---\n");
    let _ = writeln!(out, "name: {}", s.name);
    let _ = writeln!(out, "level: {}", s.meta.level);
    let _ = writeln!(out, "topic: {}", s.meta.topic);
    if let Some(src) = &s.meta.source {
        let _ = writeln!(out, "source: {src}");
    }
    if !s.meta.constants.is_empty() {
        out.push_str("constants:\n");
        for (n, v) in &s.meta.constants {
            let _ = writeln!(out, "  {n}: {}", number(v));
        }
    }
    out.push_str("---\n");
    let _ = write!(out, "theorem {}", s.name);
    let mut i = 0;
    while i < s.decls.len() {
        let d = &s.decls[i];
        let mut names = vec![d.name.as_str()];
        if d.default.is_none() {
            while let Some(next) = s.decls.get(i + names.len()) {
                if next.default.is_none() && next.kind == d.kind {
                    names.push(&next.name);
                } else {
                    break;
                }
            }
        }
        let _ = write!(out, "\n  ({} : {}", names.join(" "), decl_kind(&d.kind));
        if let Some(e) = &d.default {
            let _ = write!(out, " := {}", print_expr(e));
        }
        out.push(')');
        i += names.len();
    }
    for h in &s.hyps {
        let _ = write!(out, "\n  ({} : {})", h.name, print_prop(&h.prop));
    }
    let _ = writeln!(out, " :\n  {}", print_prop(&s.goal));
    out
}

fn decl_kind(k: &DeclKind) -> String {
    match k {
        DeclKind::Scalar(k) => print_kind(k),
        DeclKind::Function(a, b) => format!("{} → {}", print_kind(a), print_kind(b)),
    }
}

pub fn print_kind(k: &KindExpr) -> String {
    match k {
        KindExpr::Name(n) => n.clone(),
        KindExpr::Mul(a, b) => format!("{} * {}", print_kind(a), kind_operand(b)),
        KindExpr::Div(a, b) => format!("{} / {}", print_kind(a), kind_operand(b)),
    }
}

fn kind_operand(k: &KindExpr) -> String {
    match k {
        KindExpr::Name(n) => n.clone(),
        _ => format!("({})", print_kind(k)),
    }
}

fn number(r: &BigRational) -> String {
    terminating_decimal(r).unwrap_or_else(|| format!("({}/{})", r.numer(), r.denom()))
}

fn exponent(q: &Rational64) -> String {
    if q.is_integer() && !q.is_negative() {
        q.numer().to_string()
    } else if q.is_integer() {
        format!("({})", q.numer())
    } else {
        format!("({}/{})", q.numer(), q.denom())
    }
}

fn expr_level(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Add(..) | ExprKind::Sub(..) => 1,
        ExprKind::Mul(..) | ExprKind::Div(..) => 2,
        ExprKind::SMul(..) => 3,
        ExprKind::Neg(_) => 4,
        ExprKind::Pow(..) => 5,
        _ => 6,
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    if expr_level(e) < min {
        out.push('(');
        write_expr(out, e, 0);
        out.push(')');
        return;
    }
    let bin = |out: &mut String, a: &Expr, op: &str, b: &Expr, la: u8, lb: u8| {
        write_expr(out, a, la);
        out.push_str(op);
        write_expr(out, b, lb);
    };
    match &e.kind {
        ExprKind::Num(r) => out.push_str(&number(r)),
        ExprKind::Const(c) if c == "pi" => out.push('π'),
        ExprKind::Const(c) | ExprKind::Var(c) | ExprKind::Unit(c) => out.push_str(c),
        ExprKind::StandardUnit => out.push_str("StandardUnit"),
        ExprKind::Prefix(p, a) => call(out, p, &[a]),
        ExprKind::Add(a, b) => bin(out, a, " + ", b, 1, 2),
        ExprKind::Sub(a, b) => bin(out, a, " - ", b, 1, 2),
        ExprKind::Mul(a, b) => bin(out, a, " * ", b, 2, 3),
        ExprKind::Div(a, b) => bin(out, a, " / ", b, 2, 3),
        ExprKind::SMul(a, b) => bin(out, a, " • ", b, 4, 3),
        ExprKind::Neg(a) => {
            out.push('-');
            let min = if matches!(a.kind, ExprKind::Neg(_)) { 5 } else { 4 };
            write_expr(out, a, min);
        }
        ExprKind::Pow(a, q) => {
            write_expr(out, a, 6);
            out.push_str("**");
            out.push_str(&exponent(q));
        }
        ExprKind::RPow(a, b) => call(out, "rpow", &[a, b]),
        ExprKind::Cast(a, k) => {
            out.push_str("cast(");
            write_expr(out, a, 0);
            out.push_str(", ");
            out.push_str(&print_kind(k));
            out.push(')');
        }
        ExprKind::Val(a) => call(out, "val", &[a]),
        ExprKind::Norm(a) => {
            out.push('‖');
            write_expr(out, a, 0);
            out.push('‖');
        }
        ExprKind::Fn(f, a) => call(out, f.name(), &[a]),
        ExprKind::Apply(f, a) => call(out, f, &[a]),
        ExprKind::Deriv(f, a) => {
            let _ = write!(out, "deriv({f}, ");
            write_expr(out, a, 0);
            out.push(')');
        }
    }
}

fn call(out: &mut String, name: &str, args: &[&Expr]) {
    out.push_str(name);
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, a, 0);
    }
    out.push(')');
}

fn prop_level(p: &Prop) -> u8 {
    match &p.kind {
        PropKind::ForallFinite { .. } | PropKind::ForallFn { .. } => 0,
        PropKind::Implies(..) => 1,
        PropKind::Or(..) => 2,
        PropKind::And(..) => 3,
        _ => 4,
    }
}

pub fn print_prop(p: &Prop) -> String {
    let mut out = String::new();
    write_prop(&mut out, p, 0);
    out
}

fn write_prop(out: &mut String, p: &Prop, min: u8) {
    let level = prop_level(p);
    // A quantifier extends to the right, so it only needs parentheses
    // where something could follow it.
    let needs = if level == 0 { min > 1 } else { level < min };
    if needs {
        out.push('(');
        write_prop(out, p, 0);
        out.push(')');
        return;
    }
    let rel = |out: &mut String, a: &Expr, op: &str, b: &Expr| {
        write_expr(out, a, 0);
        out.push_str(op);
        write_expr(out, b, 0);
    };
    match &p.kind {
        PropKind::Eq(a, b) => rel(out, a, " = ", b),
        PropKind::Le(a, b) => rel(out, a, " ≤ ", b),
        PropKind::Lt(a, b) => rel(out, a, " < ", b),
        PropKind::Ne(a, b) => rel(out, a, " ≠ ", b),
        PropKind::And(a, b) => {
            write_prop(out, a, 4);
            out.push_str(" ∧ ");
            write_prop(out, b, 3);
        }
        PropKind::Or(a, b) => {
            write_prop(out, a, 3);
            out.push_str(" ∨ ");
            write_prop(out, b, 2);
        }
        PropKind::Implies(a, b) => {
            write_prop(out, a, 2);
            out.push_str(" → ");
            write_prop(out, b, 1);
        }
        PropKind::ForallFinite {
            var,
            kind,
            values,
            body,
        } => {
            out.push_str("∀ ");
            binder(out, var, kind.as_ref());
            out.push_str(" ∈ {");
            for (i, v) in values.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, v, 0);
            }
            out.push_str("}, ");
            write_prop(out, body, 0);
        }
        PropKind::ForallFn { var, kind, body } => {
            out.push_str("∀ ");
            binder(out, var, kind.as_ref());
            out.push_str(", ");
            write_prop(out, body, 0);
        }
    }
}

fn binder(out: &mut String, var: &str, kind: Option<&KindExpr>) {
    match kind {
        Some(k) => {
            let _ = write!(out, "({var} : {})", print_kind(k));
        }
        None => out.push_str(var),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_statement;

    fn goal(src: &str) -> String {
        print_prop(&parse_statement(src).unwrap().goal)
    }

    #[test]
    fn redundant_parentheses_are_dropped() {
        assert_eq!(
            goal("theorem t (a b c : Real) : ((a) + (b * c)) = ((a + b) + c)"),
            "a + b * c = a + b + c"
        );
        assert_eq!(
            goal("theorem t (a b c : Real) : (a - (b - c)) = a / (b * c)"),
            "a - (b - c) = a / (b * c)"
        );
        assert_eq!(goal("theorem t : (0 = 0 ∧ (1 = 1))"), "0 = 0 ∧ 1 = 1");
    }

    #[test]
    fn scalar_action_and_negation() {
        assert_eq!(
            goal("theorem t (v : Speed) : v = -2 *. meter / second"),
            "v = -2 • meter / second"
        );
        assert_eq!(goal("theorem t (x : Real) : - (-x) = x"), "-(-x) = x");
        assert_eq!(goal("theorem t (x : Real) : (-x) ^ 2 = x ** 2"), "(-x)**2 = x**2");
        assert_eq!(goal("theorem t (x : Real) : x ** (-1/3) = 1"), "x**(-1/3) = 1");
    }

    #[test]
    fn quantifier_parenthesization() {
        assert_eq!(
            goal("theorem t : (∀ x, x = x) ∧ (0 = 0 → ∀ y ∈ {1, -1}, y * y = 1)"),
            "(∀ x, x = x) ∧ (0 = 0 → ∀ y ∈ {1, -1}, y * y = 1)"
        );
    }

    #[test]
    fn statement_layout() {
        let s = parse_statement(
            "theorem k (P1 P2 : Pressure) (k : Real) (h : k = val(P1 / P2)) : k = 1",
        )
        .unwrap();
        assert_eq!(
            print_statement(&s),
            "---\nname: k\nlevel: college\ntopic: mechanics\n---\ntheorem k\n  (P1 P2 : Pressure)\n  (k : Real)\n  (h : k = val(P1 / P2)) :\n  k = 1\n"
        );
    }
}
