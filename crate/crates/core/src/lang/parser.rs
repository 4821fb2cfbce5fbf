use num_rational::{BigRational, Rational64};

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, ParseErrorKind, RESERVED};
use crate::numeric::NumericValue;
use crate::unitdb::{near_matches, UnitDb};

/// Names visible to the expression parser.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    scalars: Vec<String>,
    functions: Vec<String>,
}

impl Scope {
    pub fn new() -> Scope {
        Scope::default()
    }

    pub fn from_statement(s: &Statement) -> Scope {
        let mut scope = Scope::new();
        for d in &s.decls {
            if d.is_function() {
                scope.functions.push(d.name.clone());
            } else {
                scope.scalars.push(d.name.clone());
            }
        }
        scope
    }

    pub fn push_scalar(&mut self, name: &str) {
        self.scalars.push(name.to_string());
    }

    pub fn push_function(&mut self, name: &str) {
        self.functions.push(name.to_string());
    }

    fn pop_scalar(&mut self) {
        self.scalars.pop();
    }

    pub fn is_scalar(&self, name: &str) -> bool {
        self.scalars.iter().any(|s| s == name)
    }

    pub fn is_function(&self, name: &str) -> bool {
        self.functions.iter().any(|s| s == name)
    }

    fn all(&self) -> impl Iterator<Item = &String> {
        self.scalars.iter().chain(self.functions.iter())
    }
}

pub fn parse_statement(text: &str) -> Result<Statement, ParseError> {
    parse_statement_with(text, UnitDb::shared())
}

pub fn parse_statement_with(text: &str, db: &UnitDb) -> Result<Statement, ParseError> {
    let (front, offset) = front_matter(text)?;
    let toks = tokenize(text, offset)?;
    let mut p = Parser::new(text, toks, db, Scope::new());
    let stmt = p.statement(front)?;
    Ok(stmt)
}

/// Parses a standalone expression against `scope`.
pub fn parse_expr(text: &str, scope: &Scope, db: &UnitDb) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, tokenize(text, 0)?, db, scope.clone());
    let e = p.expr()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(e)
}

pub fn parse_prop(text: &str, scope: &Scope, db: &UnitDb) -> Result<Prop, ParseError> {
    let mut p = Parser::new(text, tokenize(text, 0)?, db, scope.clone());
    let e = p.prop()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(e)
}

#[derive(Debug, Default)]
struct FrontMatter {
    name: Option<String>,
    meta: Metadata,
}

fn front_matter(src: &str) -> Result<(Option<FrontMatter>, usize), ParseError> {
    let trimmed = src.trim_start();
    if !trimmed.starts_with("---") {
        return Ok((None, 0));
    }
    let mut offset = src.len() - trimmed.len();
    let mut lines = Vec::new();
    let mut closed = None;
    let mut first = true;
    for line in src[offset..].split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        if first {
            first = false;
            if line.trim() != "---" {
                return Err(fm_err(src, start, line, "opening `---` must be alone on its line"));
            }
            continue;
        }
        if line.trim() == "---" {
            closed = Some(offset);
            break;
        }
        lines.push((start, line));
    }
    let Some(end) = closed else {
        return Err(fm_err(src, src.len(), "", "missing closing `---`"));
    };
    let mut fm = FrontMatter::default();
    let (mut level, mut topic) = (None, None);
    let mut in_constants = false;
    for (start, line) in lines {
        let content = line.trim_end();
        if content.trim().is_empty() || content.trim_start().starts_with('#') {
            continue;
        }
        let indented = content.starts_with(' ') || content.starts_with('\t');
        let Some((key, value)) = content.trim().split_once(':') else {
            return Err(fm_err(src, start, line, "expected `key: value`"));
        };
        let (key, value) = (key.trim(), value.trim());
        if indented && in_constants {
            let v = NumericValue::parse_decimal(value)
                .ok()
                .and_then(|v| v.as_exact().cloned())
                .ok_or_else(|| fm_err(src, start, line, "constant value must be a decimal"))?;
            fm.meta.constants.push((key.to_string(), v));
            continue;
        }
        in_constants = false;
        match key {
            "name" => fm.name = Some(value.to_string()),
            "level" => {
                level = Some(
                    value
                        .parse::<Level>()
                        .map_err(|e| fm_err(src, start, line, &e))?,
                )
            }
            "topic" => {
                topic = Some(
                    value
                        .parse()
                        .map_err(|e: String| fm_err(src, start, line, &e))?,
                )
            }
            "source" => fm.meta.source = Some(value.to_string()),
            "constants" if value.is_empty() => in_constants = true,
            other => {
                return Err(fm_err(src, start, line, &format!("unknown key `{other}`")));
            }
        }
    }
    fm.meta.level = level.ok_or_else(|| fm_err(src, 0, "", "missing `level`"))?;
    fm.meta.topic = topic.ok_or_else(|| fm_err(src, 0, "", "missing `topic`"))?;
    Ok((Some(fm), end))
}

fn fm_err(src: &str, start: usize, line: &str, msg: &str) -> ParseError {
    ParseError::at(
        src,
        Span::new(start, start + line.trim_end().len()),
        ParseErrorKind::FrontMatter(msg.to_string()),
    )
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    db: &'a UnitDb,
    scope: Scope,
}

type PResult<T> = Result<T, ParseError>;

/// Of two failed alternatives, report the one that got further.
fn further(a: ParseError, b: ParseError) -> ParseError {
    if b.span.start > a.span.start {
        b
    } else {
        a
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, toks: Vec<Token>, db: &'a UnitDb, scope: Scope) -> Parser<'a> {
        Parser {
            src,
            toks,
            pos: 0,
            db,
            scope,
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].span.end
        }
    }

    fn from(&self, start: Span) -> Span {
        Span::new(start.start, self.prev_end().max(start.start))
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::at(
            self.src,
            self.span(),
            ParseErrorKind::Expected {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: self.peek().to_string(),
            },
        )
    }

    fn err_at(&self, span: Span, kind: ParseErrorKind) -> ParseError {
        ParseError::at(self.src, span, kind)
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<Span> {
        if self.peek() == &t {
            Ok(self.bump().span)
        } else {
            Err(self.error(&[what]))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let sp = self.bump().span;
                Ok((s, sp))
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn statement(&mut self, front: Option<FrontMatter>) -> PResult<Statement> {
        match self.peek() {
            Tok::Ident(s) if s == "theorem" => {
                self.bump();
            }
            _ => return Err(self.error(&["`theorem`"])),
        }
        let (name, name_span) = self.ident("theorem name")?;
        let mut decls: Vec<Decl> = Vec::new();
        let mut hyps: Vec<Hypothesis> = Vec::new();
        while self.peek() == &Tok::LParen {
            self.binder(&mut decls, &mut hyps)?;
        }
        self.expect(Tok::Colon, "`:` or `(`")?;
        let goal = self.prop()?;
        self.expect(Tok::Eof, "end of input")?;
        let meta = match front {
            Some(fm) => {
                if let Some(n) = &fm.name {
                    if n != &name {
                        return Err(self.err_at(
                            name_span,
                            ParseErrorKind::FrontMatter(format!(
                                "name `{n}` does not match theorem `{name}`"
                            )),
                        ));
                    }
                }
                fm.meta
            }
            None => Metadata::default(),
        };
        Ok(Statement {
            name,
            meta,
            decls,
            hyps,
            goal,
        })
    }

    fn binder(&mut self, decls: &mut Vec<Decl>, hyps: &mut Vec<Hypothesis>) -> PResult<()> {
        let open = self.expect(Tok::LParen, "`(`")?;
        let save = self.pos;
        let decl_err = match self.decl_binder(open) {
            Ok(new) => {
                for d in new {
                    let dup = decls.iter().any(|x| x.name == d.name);
                    if dup {
                        return Err(self.err_at(
                            d.span,
                            ParseErrorKind::Duplicate {
                                what: "variable",
                                name: d.name,
                            },
                        ));
                    }
                    if d.default.is_some() {
                        let hname = format!("{}_default", d.name);
                        if hyps.iter().any(|h| h.name == hname) {
                            return Err(self.err_at(
                                d.span,
                                ParseErrorKind::Duplicate {
                                    what: "hypothesis",
                                    name: hname,
                                },
                            ));
                        }
                    }
                    if d.is_function() {
                        self.scope.push_function(&d.name);
                    } else {
                        self.scope.push_scalar(&d.name);
                    }
                    decls.push(d);
                }
                return Ok(());
            }
            Err(e) if matches!(e.kind, ParseErrorKind::Reserved(_)) => return Err(e),
            Err(e) => e,
        };
        self.pos = save;
        if !matches!((self.peek(), self.peek_at(1)), (Tok::Ident(_), Tok::Colon)) {
            return Err(decl_err);
        }
        let (name, name_span) = self.ident("hypothesis name")?;
        self.bump();
        let prop = match self.prop() {
            Ok(p) => p,
            Err(e) => return Err(further(decl_err, e)),
        };
        if let Err(e) = self.expect(Tok::RParen, "`)`") {
            return Err(further(decl_err, e));
        }
        let taken = hyps.iter().any(|h| h.name == name)
            || decls
                .iter()
                .any(|d| d.default.is_some() && format!("{}_default", d.name) == name);
        if taken {
            return Err(self.err_at(
                name_span,
                ParseErrorKind::Duplicate {
                    what: "hypothesis",
                    name,
                },
            ));
        }
        hyps.push(Hypothesis {
            name,
            prop,
            span: self.from(open),
        });
        Ok(())
    }

    fn decl_binder(&mut self, open: Span) -> PResult<Vec<Decl>> {
        let mut names = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            let (n, sp) = self.ident("variable name")?;
            if RESERVED.contains(&n.as_str()) {
                return Err(self.err_at(sp, ParseErrorKind::Reserved(n)));
            }
            names.push((n, sp));
        }
        if names.is_empty() {
            return Err(self.error(&["variable name"]));
        }
        self.expect(Tok::Colon, "`:`")?;
        let dom = self.kind()?;
        let kind = if self.eat(&Tok::Arrow) {
            DeclKind::Function(dom, self.kind()?)
        } else {
            DeclKind::Scalar(dom)
        };
        let default = if names.len() == 1 && matches!(kind, DeclKind::Scalar(_)) && self.eat(&Tok::ColonEq) {
            Some(self.expr()?)
        } else {
            None
        };
        self.expect(Tok::RParen, "`)`")?;
        let span = self.from(open);
        Ok(names
            .into_iter()
            .map(|(name, _)| Decl {
                name,
                kind: kind.clone(),
                default: default.clone(),
                span,
            })
            .collect())
    }

    fn kind(&mut self) -> PResult<KindExpr> {
        let mut k = self.kind_atom()?;
        loop {
            if self.eat(&Tok::Star) {
                k = KindExpr::Mul(Box::new(k), Box::new(self.kind_atom()?));
            } else if self.eat(&Tok::Slash) {
                k = KindExpr::Div(Box::new(k), Box::new(self.kind_atom()?));
            } else {
                return Ok(k);
            }
        }
    }

    fn kind_atom(&mut self) -> PResult<KindExpr> {
        if self.eat(&Tok::LParen) {
            let k = self.kind()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(k);
        }
        let (name, sp) = self.ident("kind")?;
        let name = match name.as_str() {
            "ℝ" => "Real".to_string(),
            "ℤ" => "Int".to_string(),
            "ℚ" => "Rat".to_string(),
            _ => name,
        };
        if NUMBER_KINDS.contains(&name.as_str()) || self.db.kind(&name).is_some() {
            Ok(KindExpr::Name(name))
        } else {
            let known: Vec<String> = self
                .db
                .kinds()
                .map(|k| k.name.clone())
                .chain(NUMBER_KINDS.iter().map(|s| s.to_string()))
                .collect();
            Err(self.err_at(
                sp,
                ParseErrorKind::UnknownKind {
                    suggestions: near_matches(&name, known.iter()),
                    name,
                },
            ))
        }
    }

    pub(crate) fn prop(&mut self) -> PResult<Prop> {
        if self.peek() == &Tok::Forall {
            return self.forall();
        }
        let start = self.span();
        let lhs = self.disj()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.prop()?;
            return Ok(Prop::new(
                PropKind::Implies(Box::new(lhs), Box::new(rhs)),
                self.from(start),
            ));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> PResult<Prop> {
        let start = self.span();
        let lhs = self.conj()?;
        if self.eat(&Tok::Or) {
            let rhs = self.disj()?;
            return Ok(Prop::new(
                PropKind::Or(Box::new(lhs), Box::new(rhs)),
                self.from(start),
            ));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> PResult<Prop> {
        let start = self.span();
        let lhs = self.patom()?;
        if self.eat(&Tok::And) {
            let rhs = self.conj()?;
            return Ok(Prop::new(
                PropKind::And(Box::new(lhs), Box::new(rhs)),
                self.from(start),
            ));
        }
        Ok(lhs)
    }

    fn patom(&mut self) -> PResult<Prop> {
        if self.peek() == &Tok::Forall {
            return self.forall();
        }
        if self.peek() == &Tok::LParen {
            let save = self.pos;
            let start = self.bump().span;
            let inner = match self.prop() {
                Ok(p) if self.peek() == &Tok::RParen => {
                    self.bump();
                    Ok(p)
                }
                Ok(_) => Err(self.error(&["`)`"])),
                Err(e) => Err(e),
            };
            match inner {
                Ok(mut p) => {
                    p.span = self.from(start);
                    return Ok(p);
                }
                Err(e1) => {
                    self.pos = save;
                    return self.relation().map_err(|e2| further(e1, e2));
                }
            }
        }
        self.relation()
    }

    fn forall(&mut self) -> PResult<Prop> {
        let start = self.expect(Tok::Forall, "`∀`")?;
        let (var, kind) = if self.eat(&Tok::LParen) {
            let (v, _) = self.ident("bound variable")?;
            self.expect(Tok::Colon, "`:`")?;
            let k = self.kind()?;
            self.expect(Tok::RParen, "`)`")?;
            (v, Some(k))
        } else {
            let (v, _) = self.ident("bound variable")?;
            let k = if self.eat(&Tok::Colon) {
                Some(self.kind()?)
            } else {
                None
            };
            (v, k)
        };
        if self.eat(&Tok::In) {
            self.expect(Tok::LBrace, "`{`")?;
            let mut values = vec![self.expr()?];
            while self.eat(&Tok::Comma) {
                values.push(self.expr()?);
            }
            self.expect(Tok::RBrace, "`}` or `,`")?;
            self.expect(Tok::Comma, "`,`")?;
            self.scope.push_scalar(&var);
            let body = self.prop();
            self.scope.pop_scalar();
            return Ok(Prop::new(
                PropKind::ForallFinite {
                    var,
                    kind,
                    values,
                    body: Box::new(body?),
                },
                self.from(start),
            ));
        }
        self.expect(Tok::Comma, "`,` or `∈`")?;
        self.scope.push_scalar(&var);
        let body = self.prop();
        self.scope.pop_scalar();
        Ok(Prop::new(
            PropKind::ForallFn {
                var,
                kind,
                body: Box::new(body?),
            },
            self.from(start),
        ))
    }

    fn relation(&mut self) -> PResult<Prop> {
        let start = self.span();
        let a = self.expr()?;
        let op = self.peek().clone();
        let rel = match op {
            Tok::Eq | Tok::Ne | Tok::Le | Tok::Lt | Tok::Ge | Tok::Gt => {
                self.bump();
                op
            }
            _ => return Err(self.error(&["`=`", "`≠`", "`≤`", "`<`", "`≥`", "`>`"])),
        };
        let b = self.expr()?;
        let kind = match rel {
            Tok::Eq => PropKind::Eq(a, b),
            Tok::Ne => PropKind::Ne(a, b),
            Tok::Le => PropKind::Le(a, b),
            Tok::Lt => PropKind::Lt(a, b),
            Tok::Ge => PropKind::Le(b, a),
            _ => PropKind::Lt(b, a),
        };
        Ok(Prop::new(kind, self.from(start)))
    }

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut a = self.term()?;
        loop {
            let ctor: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek() {
                Tok::Plus => ExprKind::Add,
                Tok::Minus => ExprKind::Sub,
                _ => return Ok(a),
            };
            self.bump();
            let b = self.term()?;
            a = Expr::new(ctor(Box::new(a), Box::new(b)), self.from(start));
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut a = self.smul()?;
        loop {
            let ctor: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek() {
                Tok::Star => ExprKind::Mul,
                Tok::Slash => ExprKind::Div,
                _ => return Ok(a),
            };
            self.bump();
            let b = self.smul()?;
            a = Expr::new(ctor(Box::new(a), Box::new(b)), self.from(start));
        }
    }

    fn smul(&mut self) -> PResult<Expr> {
        let start = self.span();
        let a = self.unary()?;
        if self.eat(&Tok::SMul) {
            let b = self.smul()?;
            return Ok(Expr::new(
                ExprKind::SMul(Box::new(a), Box::new(b)),
                self.from(start),
            ));
        }
        Ok(a)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.span();
        if self.eat(&Tok::Minus) {
            let e = self.unary()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(e)), self.from(start)));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let start = self.span();
        let base = self.postfix()?;
        if self.eat(&Tok::Pow) {
            let q = self.exponent()?;
            return Ok(Expr::new(
                ExprKind::Pow(Box::new(base), q),
                self.from(start),
            ));
        }
        Ok(base)
    }

    fn int_lit(&mut self) -> PResult<i64> {
        match self.peek().clone() {
            Tok::Number(s) => {
                let sp = self.bump().span;
                s.parse::<i64>()
                    .map_err(|_| self.err_at(sp, ParseErrorKind::BadNumber(s)))
            }
            _ => Err(self.error(&["integer exponent"])),
        }
    }

    fn exponent(&mut self) -> PResult<Rational64> {
        if self.eat(&Tok::LParen) {
            let neg = self.eat(&Tok::Minus);
            let n = self.int_lit()?;
            let d = if self.eat(&Tok::Slash) {
                let sp = self.span();
                let d = self.int_lit()?;
                if d == 0 {
                    return Err(self.err_at(sp, ParseErrorKind::BadNumber("0".into())));
                }
                d
            } else {
                1
            };
            self.expect(Tok::RParen, "`)`")?;
            let n = if neg { -n } else { n };
            return Ok(Rational64::new(n, d));
        }
        let neg = self.eat(&Tok::Minus);
        let n = self.int_lit()?;
        Ok(Rational64::from_integer(if neg { -n } else { n }))
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut e = self.primary()?;
        while self.peek() == &Tok::Dot && matches!(self.peek_at(1), Tok::Ident(s) if s == "val") {
            self.bump();
            self.bump();
            e = Expr::new(ExprKind::Val(Box::new(e)), self.from(start));
        }
        Ok(e)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Number(s) => {
                self.bump();
                let r = number(&s).ok_or_else(|| self.err_at(start, ParseErrorKind::BadNumber(s)))?;
                Ok(Expr::new(ExprKind::Num(r), start))
            }
            Tok::LParen => {
                self.bump();
                let mut e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                e.span = self.from(start);
                Ok(e)
            }
            Tok::Norm => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::Norm, "`‖`")?;
                Ok(Expr::new(ExprKind::Norm(Box::new(e)), self.from(start)))
            }
            Tok::Ident(name) => {
                self.bump();
                if self.peek() == &Tok::LParen {
                    return self.call(name, start);
                }
                let kind = match name.as_str() {
                    "π" | "pi" => ExprKind::Const("pi".into()),
                    "StandardUnit" => ExprKind::StandardUnit,
                    n if self.scope.is_scalar(n) || self.scope.is_function(n) => {
                        ExprKind::Var(name)
                    }
                    n if self.db.unit(n).is_some() => ExprKind::Unit(name),
                    n if self.db.constant(n).is_some() => ExprKind::Const(name),
                    _ => {
                        return Err(self.undeclared(name, start));
                    }
                };
                Ok(Expr::new(kind, start))
            }
            _ => Err(self.error(&["expression"])),
        }
    }

    fn undeclared(&self, name: String, span: Span) -> ParseError {
        let pool: Vec<String> = self
            .scope
            .all()
            .cloned()
            .chain(self.db.units().map(|u| u.name.clone()))
            .chain(self.db.constants().map(|c| c.name.clone()))
            .collect();
        self.err_at(
            span,
            ParseErrorKind::Undeclared {
                suggestions: near_matches(&name, pool.iter()),
                name,
            },
        )
    }

    fn call(&mut self, name: String, start: Span) -> PResult<Expr> {
        self.expect(Tok::LParen, "`(`")?;
        let kind = match name.as_str() {
            "deriv" => {
                let (f, sp) = self.ident("function variable")?;
                if !self.scope.is_function(&f) {
                    return Err(self.err_at(sp, ParseErrorKind::NotAFunction(f)));
                }
                self.expect(Tok::Comma, "`,`")?;
                ExprKind::Deriv(f, Box::new(self.expr()?))
            }
            "rpow" => {
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                ExprKind::RPow(Box::new(a), Box::new(self.expr()?))
            }
            "cast" => {
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                ExprKind::Cast(Box::new(a), self.kind()?)
            }
            "val" => ExprKind::Val(Box::new(self.expr()?)),
            "norm" => ExprKind::Norm(Box::new(self.expr()?)),
            n => {
                if let Some(f) = Func::from_name(n) {
                    ExprKind::Fn(f, Box::new(self.expr()?))
                } else if self.scope.is_function(n) {
                    ExprKind::Apply(name, Box::new(self.expr()?))
                } else if self.scope.is_scalar(n) {
                    return Err(self.err_at(start, ParseErrorKind::NotAFunction(name)));
                } else if self.db.prefix(n).is_some() {
                    ExprKind::Prefix(name, Box::new(self.expr()?))
                } else {
                    return Err(self.undeclared(name, start));
                }
            }
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(Expr::new(kind, self.from(start)))
    }
}

fn number(text: &str) -> Option<BigRational> {
    NumericValue::parse_decimal(text)
        .ok()?
        .as_exact()
        .cloned()
}
