//! Derivation scripts: one proof step per line.
//!
//! ```text
//! subst hx3          -- rewrite with a local equation
//! split
//! intro h
//! case_split ε {1, -1}
//! instantiate hv 2 • second as hv2
//! poly_match hxxx t
//! ring
//! numeric
//! exact h
//! ```
//!
//! Expressions inside steps are parsed when the step runs, against the
//! variables in scope at that point.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Splits a conjunction into two goals, left first.
    Split,
    /// Introduces an implication premise or a quantified variable.
    Intro(Option<String>),
    /// One goal per value of an introduced finite-domain variable.
    CaseSplit { var: String, values: Vec<String> },
    /// Rewrites with the local equation `lhs = rhs`, left to right.
    Subst(String),
    /// Specializes a universally quantified local.
    Instantiate {
        hyp: String,
        arg: String,
        name: Option<String>,
    },
    /// Equates coefficients of two functions given as polynomials in `var`.
    PolyMatch { hyp: String, var: String },
    RingCheck,
    NumericCheck,
    ExactHyp(String),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Split => f.write_str("split"),
            Step::Intro(None) => f.write_str("intro"),
            Step::Intro(Some(n)) => write!(f, "intro {n}"),
            Step::CaseSplit { var, values } => write!(f, "case_split {var} {{{}}}", values.join(", ")),
            Step::Subst(h) => write!(f, "subst {h}"),
            Step::Instantiate { hyp, arg, name } => {
                write!(f, "instantiate {hyp} {arg}")?;
                if let Some(n) = name {
                    write!(f, " as {n}")?;
                }
                Ok(())
            }
            Step::PolyMatch { hyp, var } => write!(f, "poly_match {hyp} {var}"),
            Step::RingCheck => f.write_str("ring"),
            Step::NumericCheck => f.write_str("numeric"),
            Step::ExactHyp(h) => write!(f, "exact {h}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DerivationScript {
    pub steps: Vec<Step>,
}

impl fmt::Display for DerivationScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || ('₀'..='₉').contains(&c))
}

/// Splits at commas that are not nested in parentheses or bars.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn parse_line(line: &str) -> Result<Step, String> {
    let (head, rest) = match line.split_once(char::is_whitespace) {
        Some((h, r)) => (h, r.trim()),
        None => (line, ""),
    };
    let words: Vec<&str> = rest.split_whitespace().collect();
    let name = |what: &str| -> Result<String, String> {
        match words.as_slice() {
            [n] if is_name(n) => Ok(n.to_string()),
            _ => Err(format!("`{head}` takes one {what} name")),
        }
    };
    let none = || -> Result<(), String> {
        if words.is_empty() {
            Ok(())
        } else {
            Err(format!("`{head}` takes no arguments"))
        }
    };
    Ok(match head {
        "split" => {
            none()?;
            Step::Split
        }
        "intro" => match words.as_slice() {
            [] => Step::Intro(None),
            [n] if is_name(n) => Step::Intro(Some(n.to_string())),
            _ => return Err("`intro` takes at most one name".into()),
        },
        "case_split" => {
            let (var, vals) = rest
                .split_once(char::is_whitespace)
                .ok_or("`case_split` needs a variable and a value set")?;
            let vals = vals.trim();
            if !is_name(var) || !vals.starts_with('{') || !vals.ends_with('}') {
                return Err("expected `case_split VAR {v1, v2, ...}`".into());
            }
            let values = split_top_level(&vals[1..vals.len() - 1]);
            if values.is_empty() {
                return Err("empty value set".into());
            }
            Step::CaseSplit {
                var: var.to_string(),
                values,
            }
        }
        "subst" => Step::Subst(name("hypothesis")?),
        "exact" => Step::ExactHyp(name("hypothesis")?),
        "instantiate" => {
            let (hyp, arg) = rest
                .split_once(char::is_whitespace)
                .ok_or("`instantiate` needs a hypothesis and an argument")?;
            if !is_name(hyp) {
                return Err(format!("`{hyp}` is not a hypothesis name"));
            }
            let arg = arg.trim();
            let (arg, name) = match arg.rsplit_once(" as ") {
                Some((a, n)) if is_name(n.trim()) => (a.trim(), Some(n.trim().to_string())),
                _ => (arg, None),
            };
            if arg.is_empty() {
                return Err("missing argument".into());
            }
            Step::Instantiate {
                hyp: hyp.to_string(),
                arg: arg.to_string(),
                name,
            }
        }
        "poly_match" => match words.as_slice() {
            [h, v] if is_name(h) && is_name(v) => Step::PolyMatch {
                hyp: h.to_string(),
                var: v.to_string(),
            },
            _ => return Err("expected `poly_match HYP VAR`".into()),
        },
        "ring" => {
            none()?;
            Step::RingCheck
        }
        "numeric" => {
            none()?;
            Step::NumericCheck
        }
        other => return Err(format!("unknown step `{other}`")),
    })
}

impl FromStr for DerivationScript {
    type Err = ScriptError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = match raw.find("--") {
                Some(k) => &raw[..k],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            steps.push(parse_line(line).map_err(|message| ScriptError {
                line: i + 1,
                message,
            })?);
        }
        Ok(DerivationScript { steps })
    }
}
