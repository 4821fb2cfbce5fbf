//! Statement DSL: syntax tree, parser and canonical printer.
//!
//! The grammar is in `docs/grammar.md`. A `.phys` file holds an optional
//! front-matter block followed by one `theorem`.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;

use thiserror::Error;

pub use ast::{
    ast_eq, Decl, DeclKind, Expr, ExprKind, Func, Hypothesis, KindExpr, Level, Metadata, Prop,
    PropKind, Span, Statement,
};
pub use parser::{parse_expr, parse_prop, parse_statement, parse_statement_with, Scope};
pub use printer::{print_expr, print_prop, print_statement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected {}, found {found}", expected.join(" or "))]
    Expected { expected: Vec<String>, found: String },
    #[error("undeclared identifier `{name}`{}", hint(suggestions))]
    Undeclared {
        name: String,
        suggestions: Vec<String>,
    },
    #[error("unknown kind `{name}`{}", hint(suggestions))]
    UnknownKind {
        name: String,
        suggestions: Vec<String>,
    },
    #[error("`{0}` is not a function variable")]
    NotAFunction(String),
    #[error("unexpected character `{0}`")]
    BadChar(char),
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("duplicate {what} `{name}`")]
    Duplicate { what: &'static str, name: String },
    #[error("`{0}` is a reserved word")]
    Reserved(String),
    #[error("front matter: {0}")]
    FrontMatter(String),
}

fn hint(s: &[String]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!(" (did you mean {}?)", s.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub span: Span,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn at(src: &str, span: Span, kind: ParseErrorKind) -> ParseError {
        let (line, column) = span.line_col(src);
        ParseError {
            line,
            column,
            span,
            kind,
        }
    }

    /// The expected-token set, when this is a syntax error.
    pub fn expected(&self) -> &[String] {
        match &self.kind {
            ParseErrorKind::Expected { expected, .. } => expected,
            _ => &[],
        }
    }
}

/// Words that cannot be declared as variables.
pub const RESERVED: &[&str] = &[
    "theorem",
    "forall",
    "deriv",
    "rpow",
    "cast",
    "val",
    "norm",
    "sin",
    "cos",
    "log",
    "exp",
    "sqrt",
    "pi",
    "π",
    "StandardUnit",
];
