//! Bidirectional dimension analysis.
//!
//! `StandardUnit` and the literal `0` have no dimension of their own; they
//! take one from the surrounding context (the other side of a sum or
//! relation, a cast target, or the right operand of `•`).

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;

use crate::dimension::Dimension;
use crate::lang::{DeclKind, Expr, ExprKind, KindExpr, Prop, PropKind, Span, Statement};
use crate::unitdb::UnitDb;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ty {
    Dim(Dimension),
    /// Dimension fixed by context. `unit` is set when a `StandardUnit` is
    /// involved, which cannot default to dimensionless.
    Poly { unit: bool },
    Function(Dimension, Dimension),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DimStatus {
    Homogeneous,
    Mismatch {
        span: Span,
        expected: Dimension,
        found: Dimension,
    },
    /// A `StandardUnit` whose dimension no context determines.
    Unresolved { span: Span },
    Invalid { span: Span, message: String },
}

impl DimStatus {
    pub fn is_homogeneous(&self) -> bool {
        matches!(self, DimStatus::Homogeneous)
    }

    pub fn span(&self) -> Option<Span> {
        match self {
            DimStatus::Homogeneous => None,
            DimStatus::Mismatch { span, .. }
            | DimStatus::Unresolved { span }
            | DimStatus::Invalid { span, .. } => Some(*span),
        }
    }
}

impl fmt::Display for DimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimStatus::Homogeneous => f.write_str("homogeneous"),
            DimStatus::Mismatch {
                expected, found, ..
            } => write!(f, "mismatch: expected {expected}, found {found}"),
            DimStatus::Unresolved { .. } => f.write_str("unresolved StandardUnit"),
            DimStatus::Invalid { message, .. } => write!(f, "invalid: {message}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimEntry {
    /// Hypothesis name, or `goal`.
    pub name: String,
    pub status: DimStatus,
}

/// One entry per hypothesis (declaration defaults first) plus the goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimReport {
    pub entries: Vec<DimEntry>,
}

impl DimReport {
    pub fn is_homogeneous(&self) -> bool {
        self.entries.iter().all(|e| e.status.is_homogeneous())
    }

    pub fn issues(&self) -> impl Iterator<Item = &DimEntry> {
        self.entries.iter().filter(|e| !e.status.is_homogeneous())
    }

    /// Text rendering with `line:col` positions resolved against `src`.
    pub fn render(&self, src: Option<&str>) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let pos = match (src, e.status.span()) {
                (Some(src), Some(sp)) => {
                    let (l, c) = sp.line_col(src);
                    format!(" at {l}:{c}")
                }
                _ => String::new(),
            };
            out.push_str(&format!("{}: {}{}\n", e.name, e.status, pos));
        }
        out
    }
}

/// Dimensions of declared and bound variables.
#[derive(Debug, Clone, Default)]
pub struct DimEnv {
    pub scalars: BTreeMap<String, Dimension>,
    pub functions: BTreeMap<String, (Dimension, Dimension)>,
}

pub fn kind_dim(k: &KindExpr, db: &UnitDb) -> Result<Dimension, String> {
    match k {
        KindExpr::Name(n) => {
            if crate::lang::ast::NUMBER_KINDS.contains(&n.as_str()) {
                Ok(Dimension::dimensionless())
            } else {
                db.lookup_kind(n).map_err(|e| e.to_string())
            }
        }
        KindExpr::Mul(a, b) => kind_dim(a, db)?
            .combine(&kind_dim(b, db)?)
            .map_err(|e| e.to_string()),
        KindExpr::Div(a, b) => kind_dim(a, db)?
            .divide(&kind_dim(b, db)?)
            .map_err(|e| e.to_string()),
    }
}

impl DimEnv {
    pub fn from_statement(s: &Statement, db: &UnitDb) -> Result<DimEnv, String> {
        let mut env = DimEnv::default();
        for d in &s.decls {
            match &d.kind {
                DeclKind::Scalar(k) => {
                    env.scalars.insert(d.name.clone(), kind_dim(k, db)?);
                }
                DeclKind::Function(a, b) => {
                    env.functions
                        .insert(d.name.clone(), (kind_dim(a, db)?, kind_dim(b, db)?));
                }
            }
        }
        Ok(env)
    }

    fn with_scalar(&self, name: &str, dim: Dimension) -> DimEnv {
        let mut e = self.clone();
        e.scalars.insert(name.to_string(), dim);
        e
    }

    /// Dimension of a `∀`-bound variable: its annotation, else an outer
    /// declaration of the same name, else the domain of a function it is
    /// applied to, else dimensionless.
    pub fn bound_dim(
        &self,
        var: &str,
        kind: Option<&KindExpr>,
        body: &Prop,
        db: &UnitDb,
    ) -> Result<Dimension, String> {
        if let Some(k) = kind {
            return kind_dim(k, db);
        }
        if let Some(d) = self.scalars.get(var) {
            return Ok(*d);
        }
        let mut found = None;
        for e in body.exprs() {
            e.visit(&mut |n| {
                if let ExprKind::Apply(f, a) | ExprKind::Deriv(f, a) = &n.kind {
                    if matches!(&a.kind, ExprKind::Var(v) if v == var) && found.is_none() {
                        found = self.functions.get(f).map(|(d, _)| *d);
                    }
                }
            });
        }
        Ok(found.unwrap_or_else(Dimension::dimensionless))
    }
}

fn invalid(span: Span, message: impl Into<String>) -> DimStatus {
    DimStatus::Invalid {
        span,
        message: message.into(),
    }
}

fn unify(a: Ty, b: Ty, span_b: Span) -> Result<Ty, DimStatus> {
    match (a, b) {
        (Ty::Dim(x), Ty::Dim(y)) => {
            if x == y {
                Ok(Ty::Dim(x))
            } else {
                Err(DimStatus::Mismatch {
                    span: span_b,
                    expected: x,
                    found: y,
                })
            }
        }
        (Ty::Dim(x), Ty::Poly { .. }) | (Ty::Poly { .. }, Ty::Dim(x)) => Ok(Ty::Dim(x)),
        (Ty::Poly { unit: u }, Ty::Poly { unit: v }) => Ok(Ty::Poly { unit: u || v }),
        (Ty::Function(a, b), Ty::Function(c, d)) if a == c && b == d => Ok(Ty::Function(a, b)),
        _ => Err(invalid(span_b, "function compared with a different type")),
    }
}

fn as_dim(ty: Ty, span: Span) -> Result<Dimension, DimStatus> {
    match ty {
        Ty::Dim(d) => Ok(d),
        Ty::Poly { unit: false } => Ok(Dimension::dimensionless()),
        Ty::Poly { unit: true } => Err(DimStatus::Unresolved { span }),
        Ty::Function(..) => Err(invalid(span, "function variable used as a value")),
    }
}

fn expect_dimensionless(e: &Expr, env: &DimEnv, db: &UnitDb) -> Result<(), DimStatus> {
    let ty = synth(e, env, db)?;
    if matches!(ty, Ty::Function(..)) {
        return Err(invalid(e.span, "function variable used as a value"));
    }
    unify(Ty::Dim(Dimension::dimensionless()), ty, e.span).map(|_| ())
}

fn overflow(span: Span) -> impl Fn(crate::dimension::DimensionError) -> DimStatus {
    move |e| invalid(span, e.to_string())
}

/// Dimension of an expression, without an expected dimension.
pub fn synth(e: &Expr, env: &DimEnv, db: &UnitDb) -> Result<Ty, DimStatus> {
    use ExprKind::*;
    let sp = e.span;
    Ok(match &e.kind {
        Num(r) => {
            if num_traits::Zero::is_zero(r) {
                Ty::Poly { unit: false }
            } else {
                Ty::Dim(Dimension::dimensionless())
            }
        }
        Const(c) => match db.constant(c) {
            Some(def) => Ty::Dim(def.dim),
            None => return Err(invalid(sp, format!("unknown constant `{c}`"))),
        },
        Var(v) => {
            if let Some(d) = env.scalars.get(v) {
                Ty::Dim(*d)
            } else if let Some((a, b)) = env.functions.get(v) {
                Ty::Function(*a, *b)
            } else {
                return Err(invalid(sp, format!("unbound variable `{v}`")));
            }
        }
        Unit(u) => match db.unit(u) {
            Some(def) => Ty::Dim(def.dim),
            None => return Err(invalid(sp, format!("unknown unit `{u}`"))),
        },
        StandardUnit => Ty::Poly { unit: true },
        Prefix(_, a) | Neg(a) => synth(a, env, db)?,
        Add(a, b) | Sub(a, b) => {
            let ta = synth(a, env, db)?;
            let tb = synth(b, env, db)?;
            if matches!(ta, Ty::Function(..)) || matches!(tb, Ty::Function(..)) {
                return Err(invalid(sp, "function variable used as a value"));
            }
            unify(ta, tb, b.span)?
        }
        Mul(a, b) | Div(a, b) => {
            let da = as_dim(synth(a, env, db)?, a.span)?;
            let db_ = as_dim(synth(b, env, db)?, b.span)?;
            let d = if matches!(e.kind, Mul(..)) {
                da.combine(&db_)
            } else {
                da.divide(&db_)
            };
            Ty::Dim(d.map_err(overflow(sp))?)
        }
        SMul(c, q) => {
            expect_dimensionless(c, env, db)?;
            let t = synth(q, env, db)?;
            if matches!(t, Ty::Function(..)) {
                return Err(invalid(q.span, "function variable used as a value"));
            }
            t
        }
        Pow(a, r) => match synth(a, env, db)? {
            Ty::Poly { unit: false } => Ty::Poly { unit: false },
            t => {
                let d = as_dim(t, a.span)?;
                Ty::Dim(d.scale(*r).map_err(overflow(sp))?)
            }
        },
        RPow(a, b) => {
            expect_dimensionless(a, env, db)?;
            expect_dimensionless(b, env, db)?;
            Ty::Dim(Dimension::dimensionless())
        }
        Cast(a, k) => {
            let target = kind_dim(k, db).map_err(|m| invalid(sp, m))?;
            let t = synth(a, env, db)?;
            if matches!(t, Ty::Function(..)) {
                return Err(invalid(a.span, "function variable used as a value"));
            }
            match unify(Ty::Dim(target), t, a.span) {
                Ok(_) => Ty::Dim(target),
                Err(err) => return Err(err),
            }
        }
        Val(a) | Norm(a) => {
            if matches!(synth(a, env, db)?, Ty::Function(..)) {
                return Err(invalid(a.span, "function variable used as a value"));
            }
            Ty::Dim(Dimension::dimensionless())
        }
        Fn(_, a) => {
            expect_dimensionless(a, env, db)?;
            Ty::Dim(Dimension::dimensionless())
        }
        Apply(f, a) | Deriv(f, a) => {
            let Some((dom, cod)) = env.functions.get(f) else {
                return Err(invalid(sp, format!("`{f}` is not a function variable")));
            };
            let ta = synth(a, env, db)?;
            unify(Ty::Dim(*dom), ta, a.span)?;
            if matches!(e.kind, Apply(..)) {
                Ty::Dim(*cod)
            } else {
                Ty::Dim(cod.divide(dom).map_err(overflow(sp))?)
            }
        }
    })
}

/// Checks a proposition; returns the first issue found.
pub fn check_prop(p: &Prop, env: &DimEnv, db: &UnitDb) -> Result<(), DimStatus> {
    match &p.kind {
        PropKind::Eq(a, b) | PropKind::Le(a, b) | PropKind::Lt(a, b) | PropKind::Ne(a, b) => {
            let ta = synth(a, env, db)?;
            let tb = synth(b, env, db)?;
            let is_fn = matches!(ta, Ty::Function(..)) || matches!(tb, Ty::Function(..));
            if is_fn && !matches!(p.kind, PropKind::Eq(..)) {
                return Err(invalid(p.span, "functions can only be compared with `=`"));
            }
            unify(ta, tb, b.span).map(|_| ())
        }
        PropKind::And(a, b) | PropKind::Or(a, b) | PropKind::Implies(a, b) => {
            check_prop(a, env, db)?;
            check_prop(b, env, db)
        }
        PropKind::ForallFinite {
            var,
            kind,
            values,
            body,
        } => {
            let d = match kind {
                Some(k) => kind_dim(k, db).map_err(|m| invalid(p.span, m))?,
                None => Dimension::dimensionless(),
            };
            for v in values {
                unify(Ty::Dim(d), synth(v, env, db)?, v.span)?;
            }
            check_prop(body, &env.with_scalar(var, d), db)
        }
        PropKind::ForallFn { var, kind, body } => {
            let d = env
                .bound_dim(var, kind.as_ref(), body, db)
                .map_err(|m| invalid(p.span, m))?;
            check_prop(body, &env.with_scalar(var, d), db)
        }
    }
}

pub fn check_dimensions(s: &Statement, db: &UnitDb) -> DimReport {
    let env = match DimEnv::from_statement(s, db) {
        Ok(env) => env,
        Err(m) => {
            let status = invalid(Span::default(), m);
            let mut entries: Vec<DimEntry> = s
                .all_hypotheses()
                .into_iter()
                .map(|h| DimEntry {
                    name: h.name,
                    status: status.clone(),
                })
                .collect();
            entries.push(DimEntry {
                name: "goal".into(),
                status,
            });
            return DimReport { entries };
        }
    };
    let mut entries: Vec<DimEntry> = s
        .all_hypotheses()
        .iter()
        .map(|h| DimEntry {
            name: h.name.clone(),
            status: check_prop(&h.prop, &env, db).err().unwrap_or(DimStatus::Homogeneous),
        })
        .collect();
    entries.push(DimEntry {
        name: "goal".into(),
        status: check_prop(&s.goal, &env, db)
            .err()
            .unwrap_or(DimStatus::Homogeneous),
    });
    DimReport { entries }
}

/// `true` when `e` has no dimension of its own.
pub fn is_polymorphic(e: &Expr, env: &DimEnv, db: &UnitDb) -> bool {
    matches!(synth(e, env, db), Ok(Ty::Poly { .. }))
}

/// Helper for rational exponent display in diagnostics.
pub fn exponent_text(q: Rational64) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
