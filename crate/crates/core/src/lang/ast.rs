use std::fmt;
use std::str::FromStr;

use num_rational::{BigRational, Rational64};
use serde::{Deserialize, Serialize};

use crate::unitdb::Topic;

/// Byte range into the source text. Spans never participate in equality,
/// so the derived `PartialEq` on AST nodes compares structure only.
#[derive(Debug, Clone, Copy, Default, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// 1-based line and column (in characters) of `start` within `src`.
    pub fn line_col(&self, src: &str) -> (usize, usize) {
        line_col(src, self.start)
    }
}

pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sin,
    Cos,
    Log,
    Exp,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Log, Func::Exp, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    /// Nonnegative literal with a terminating decimal expansion.
    Num(BigRational),
    /// `π` or a named constant such as `g`.
    Const(String),
    Var(String),
    Unit(String),
    /// Scale-1 quantity whose dimension comes from context.
    StandardUnit,
    Prefix(String, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    SMul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational64),
    RPow(Box<Expr>, Box<Expr>),
    Cast(Box<Expr>, KindExpr),
    Val(Box<Expr>),
    Norm(Box<Expr>),
    Fn(Func, Box<Expr>),
    Apply(String, Box<Expr>),
    Deriv(String, Box<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    /// Node without source position, for synthesized terms.
    pub fn synth(kind: ExprKind) -> Expr {
        Expr::new(kind, Span::default())
    }

    pub fn num(r: BigRational) -> Expr {
        Expr::synth(ExprKind::Num(r))
    }

    pub fn int(n: i64) -> Expr {
        Expr::num(BigRational::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Expr {
        Expr::synth(ExprKind::Var(name.to_string()))
    }

    pub fn children(&self) -> Vec<&Expr> {
        use ExprKind::*;
        match &self.kind {
            Num(_) | Const(_) | Var(_) | Unit(_) | StandardUnit => vec![],
            Prefix(_, a) | Neg(a) | Pow(a, _) | Cast(a, _) | Val(a) | Norm(a) | Fn(_, a)
            | Apply(_, a) | Deriv(_, a) => vec![a],
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | SMul(a, b) | RPow(a, b) => {
                vec![a, b]
            }
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Expr> {
        use ExprKind::*;
        match &mut self.kind {
            Num(_) | Const(_) | Var(_) | Unit(_) | StandardUnit => vec![],
            Prefix(_, a) | Neg(a) | Pow(a, _) | Cast(a, _) | Val(a) | Norm(a) | Fn(_, a)
            | Apply(_, a) | Deriv(_, a) => vec![a],
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | SMul(a, b) | RPow(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Pre-order walk.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Every variable name referenced, including function variables in
    /// `Apply` and `Deriv` heads.
    pub fn mentions(&self, name: &str) -> bool {
        let mut hit = false;
        self.visit(&mut |e| match &e.kind {
            ExprKind::Var(v) | ExprKind::Apply(v, _) | ExprKind::Deriv(v, _) if v == name => {
                hit = true
            }
            _ => {}
        });
        hit
    }

    pub fn free_vars(&self, out: &mut Vec<String>) {
        self.visit(&mut |e| match &e.kind {
            ExprKind::Var(v) | ExprKind::Apply(v, _) | ExprKind::Deriv(v, _) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            _ => {}
        });
    }

    /// Drops spans recursively.
    pub fn strip_spans(&mut self) {
        self.span = Span::default();
        for c in self.children_mut() {
            c.strip_spans();
        }
    }
}

/// Product/quotient of kind names, e.g. `Force / Charge`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KindExpr {
    Name(String),
    Mul(Box<KindExpr>, Box<KindExpr>),
    Div(Box<KindExpr>, Box<KindExpr>),
}

impl KindExpr {
    pub fn name(n: &str) -> KindExpr {
        KindExpr::Name(n.to_string())
    }

    pub fn names(&self, out: &mut Vec<String>) {
        match self {
            KindExpr::Name(n) => out.push(n.clone()),
            KindExpr::Mul(a, b) | KindExpr::Div(a, b) => {
                a.names(out);
                b.names(out);
            }
        }
    }
}

/// Names that denote the dimensionless kind in declarations.
pub const NUMBER_KINDS: [&str; 3] = ["Real", "Int", "Rat"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclKind {
    Scalar(KindExpr),
    Function(KindExpr, KindExpr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub kind: DeclKind,
    /// `(x : K := e)` sugar; yields the hypothesis `x_default : x = e`.
    pub default: Option<Expr>,
    pub span: Span,
}

impl Decl {
    pub fn is_function(&self) -> bool {
        matches!(self.kind, DeclKind::Function(..))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop {
    pub kind: PropKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropKind {
    Eq(Expr, Expr),
    Le(Expr, Expr),
    Lt(Expr, Expr),
    Ne(Expr, Expr),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    ForallFinite {
        var: String,
        kind: Option<KindExpr>,
        values: Vec<Expr>,
        body: Box<Prop>,
    },
    ForallFn {
        var: String,
        kind: Option<KindExpr>,
        body: Box<Prop>,
    },
}

impl Prop {
    pub fn new(kind: PropKind, span: Span) -> Prop {
        Prop { kind, span }
    }

    pub fn synth(kind: PropKind) -> Prop {
        Prop::new(kind, Span::default())
    }

    pub fn eq(a: Expr, b: Expr) -> Prop {
        Prop::synth(PropKind::Eq(a, b))
    }

    pub fn sides(&self) -> Option<(&Expr, &Expr)> {
        match &self.kind {
            PropKind::Eq(a, b) | PropKind::Le(a, b) | PropKind::Lt(a, b) | PropKind::Ne(a, b) => {
                Some((a, b))
            }
            _ => None,
        }
    }

    pub fn exprs(&self) -> Vec<&Expr> {
        match &self.kind {
            PropKind::Eq(a, b) | PropKind::Le(a, b) | PropKind::Lt(a, b) | PropKind::Ne(a, b) => {
                vec![a, b]
            }
            PropKind::And(p, q) | PropKind::Or(p, q) | PropKind::Implies(p, q) => {
                let mut v = p.exprs();
                v.extend(q.exprs());
                v
            }
            PropKind::ForallFinite { values, body, .. } => {
                let mut v: Vec<&Expr> = values.iter().collect();
                v.extend(body.exprs());
                v
            }
            PropKind::ForallFn { body, .. } => body.exprs(),
        }
    }

    pub fn exprs_mut(&mut self) -> Vec<&mut Expr> {
        match &mut self.kind {
            PropKind::Eq(a, b) | PropKind::Le(a, b) | PropKind::Lt(a, b) | PropKind::Ne(a, b) => {
                vec![a, b]
            }
            PropKind::And(p, q) | PropKind::Or(p, q) | PropKind::Implies(p, q) => {
                let mut v = p.exprs_mut();
                v.extend(q.exprs_mut());
                v
            }
            PropKind::ForallFinite { values, body, .. } => {
                let mut v: Vec<&mut Expr> = values.iter_mut().collect();
                v.extend(body.exprs_mut());
                v
            }
            PropKind::ForallFn { body, .. } => body.exprs_mut(),
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.exprs().iter().any(|e| e.mentions(name))
    }

    pub fn strip_spans(&mut self) {
        self.span = Span::default();
        match &mut self.kind {
            PropKind::Eq(a, b) | PropKind::Le(a, b) | PropKind::Lt(a, b) | PropKind::Ne(a, b) => {
                a.strip_spans();
                b.strip_spans();
            }
            PropKind::And(p, q) | PropKind::Or(p, q) | PropKind::Implies(p, q) => {
                p.strip_spans();
                q.strip_spans();
            }
            PropKind::ForallFinite { values, body, .. } => {
                values.iter_mut().for_each(Expr::strip_spans);
                body.strip_spans();
            }
            PropKind::ForallFn { body, .. } => body.strip_spans(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub prop: Prop,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "college")]
    College,
    #[serde(rename = "comp-easy")]
    CompEasy,
    #[serde(rename = "comp-hard")]
    CompHard,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::College, Level::CompEasy, Level::CompHard];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::College => "college",
            Level::CompEasy => "comp-easy",
            Level::CompHard => "comp-hard",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Level::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown level `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metadata {
    pub level: Level,
    pub topic: Topic,
    pub source: Option<String>,
    /// Constant overrides, in file order.
    pub constants: Vec<(String, BigRational)>,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata {
            level: Level::College,
            topic: Topic::Mechanics,
            source: None,
            constants: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub name: String,
    pub meta: Metadata,
    pub decls: Vec<Decl>,
    pub hyps: Vec<Hypothesis>,
    pub goal: Prop,
}

impl Statement {
    pub fn decl(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name == name)
    }

    pub fn hyp(&self, name: &str) -> Option<&Hypothesis> {
        self.hyps.iter().find(|h| h.name == name)
    }

    /// Hypotheses with declaration defaults desugared in front, in
    /// declaration order.
    pub fn all_hypotheses(&self) -> Vec<Hypothesis> {
        let mut out: Vec<Hypothesis> = self
            .decls
            .iter()
            .filter_map(|d| {
                d.default.as_ref().map(|e| Hypothesis {
                    name: format!("{}_default", d.name),
                    prop: Prop::new(
                        PropKind::Eq(Expr::new(ExprKind::Var(d.name.clone()), d.span), e.clone()),
                        d.span,
                    ),
                    span: d.span,
                })
            })
            .collect();
        out.extend(self.hyps.iter().cloned());
        out
    }

    pub fn strip_spans(&mut self) {
        for d in &mut self.decls {
            d.span = Span::default();
            if let Some(e) = &mut d.default {
                e.strip_spans();
            }
        }
        for h in &mut self.hyps {
            h.span = Span::default();
            h.prop.strip_spans();
        }
        self.goal.strip_spans();
    }
}

/// Structural equality ignoring spans.
pub fn ast_eq(a: &Statement, b: &Statement) -> bool {
    a == b
}
