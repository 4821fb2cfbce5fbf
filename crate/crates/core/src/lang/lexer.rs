use std::fmt;

use super::ast::Span;
use super::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    ColonEq,
    Eq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
    Plus,
    Minus,
    Star,
    Slash,
    SMul,
    Pow,
    Arrow,
    And,
    Or,
    Forall,
    In,
    Norm,
    Dot,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Number(s) => return write!(f, "number `{s}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::ColonEq => "`:=`",
            Tok::Eq => "`=`",
            Tok::Ne => "`≠`",
            Tok::Le => "`≤`",
            Tok::Lt => "`<`",
            Tok::Ge => "`≥`",
            Tok::Gt => "`>`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::Slash => "`/`",
            Tok::SMul => "`•`",
            Tok::Pow => "`**`",
            Tok::Arrow => "`→`",
            Tok::And => "`∧`",
            Tok::Or => "`∨`",
            Tok::Forall => "`∀`",
            Tok::In => "`∈`",
            Tok::Norm => "`‖`",
            Tok::Dot => "`.`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || ('₀'..='₉').contains(&c)
}

/// Tokenizes `src[offset..]`; spans are absolute offsets into `src`.
/// `--` starts a comment running to end of line.
pub fn tokenize(src: &str, offset: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let body = &src[offset..];
    let mut it = body.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        let start = offset + i;
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if body[i..].starts_with("--") {
            while let Some(&(_, c)) = it.peek() {
                if c == '\n' {
                    break;
                }
                it.next();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = i;
            let bytes = body.as_bytes();
            while end < body.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if end + 1 < body.len() && bytes[end] == b'.' && bytes[end + 1].is_ascii_digit() {
                end += 1;
                while end < body.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
            }
            if end < body.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                let mut k = end + 1;
                if k < body.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                    k += 1;
                }
                if k < body.len() && bytes[k].is_ascii_digit() {
                    while k < body.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                    end = k;
                }
            }
            while it.peek().is_some_and(|&(j, _)| j < end) {
                it.next();
            }
            out.push(Token {
                tok: Tok::Number(body[i..end].to_string()),
                span: Span::new(start, offset + end),
            });
            continue;
        }
        if is_ident_start(c) {
            let mut end = i;
            while let Some(&(j, c)) = it.peek() {
                if j == i || is_ident_continue(c) {
                    end = j + c.len_utf8();
                    it.next();
                } else {
                    break;
                }
            }
            let word = &body[i..end];
            let tok = match word {
                "forall" => Tok::Forall,
                _ => Tok::Ident(word.to_string()),
            };
            out.push(Token {
                tok,
                span: Span::new(start, offset + end),
            });
            continue;
        }
        const SYMBOLS: &[(&str, Tok)] = &[
            (":=", Tok::ColonEq),
            ("**", Tok::Pow),
            ("*.", Tok::SMul),
            ("->", Tok::Arrow),
            ("/\\", Tok::And),
            ("\\/", Tok::Or),
            ("<=", Tok::Le),
            (">=", Tok::Ge),
            ("!=", Tok::Ne),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("{", Tok::LBrace),
            ("}", Tok::RBrace),
            (",", Tok::Comma),
            (":", Tok::Colon),
            ("=", Tok::Eq),
            ("≠", Tok::Ne),
            ("≤", Tok::Le),
            ("<", Tok::Lt),
            ("≥", Tok::Ge),
            (">", Tok::Gt),
            ("+", Tok::Plus),
            ("-", Tok::Minus),
            ("*", Tok::Star),
            ("/", Tok::Slash),
            ("•", Tok::SMul),
            ("^", Tok::Pow),
            ("→", Tok::Arrow),
            ("∧", Tok::And),
            ("∨", Tok::Or),
            ("∀", Tok::Forall),
            ("∈", Tok::In),
            ("‖", Tok::Norm),
            (".", Tok::Dot),
        ];
        let rest = &body[i..];
        match SYMBOLS.iter().find(|(s, _)| rest.starts_with(s)) {
            Some((s, tok)) => {
                let n = s.chars().count();
                for _ in 0..n {
                    it.next();
                }
                out.push(Token {
                    tok: tok.clone(),
                    span: Span::new(start, start + s.len()),
                });
            }
            None => {
                let span = Span::new(start, start + c.len_utf8());
                return Err(ParseError::at(src, span, ParseErrorKind::BadChar(c)));
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(src.len(), src.len()),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s, 0).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn ascii_and_unicode_spellings_agree() {
        assert_eq!(toks("a -> b /\\ c"), toks("a → b ∧ c"));
        assert_eq!(toks("x *. y ^ 2"), toks("x • y ** 2"));
        assert_eq!(toks("a <= b != c"), toks("a ≤ b ≠ c"));
    }

    #[test]
    fn numbers() {
        assert_eq!(
            toks("1.8*15 4e6 1e-9 2.5"),
            vec![
                Tok::Number("1.8".into()),
                Tok::Star,
                Tok::Number("15".into()),
                Tok::Number("4e6".into()),
                Tok::Number("1e-9".into()),
                Tok::Number("2.5".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn unicode_identifiers_and_comments() {
        assert_eq!(
            toks("μ_s θ_total x₀ -- trailing\nT'"),
            vec![
                Tok::Ident("μ_s".into()),
                Tok::Ident("θ_total".into()),
                Tok::Ident("x₀".into()),
                Tok::Ident("T'".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn bad_character_has_position() {
        let err = tokenize("a\n  $", 0).unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
    }
}
