//! Dimension checking, numeric evaluation and proof search over parsed
//! statements.
//!
//! The proof kernel is deliberately small: substitution, case analysis,
//! field normalization ([`ring`]), polynomial coefficient matching and exact
//! numeric evaluation. A [`Verdict`] is `Proved` only when every step of the
//! recorded [`DerivationScript`] replays through the same executor.

pub mod auto;
pub mod dims;
pub mod engine;
pub mod eval;
pub mod fuzz;
pub mod poly;
pub mod ring;
pub mod script;
pub mod subst;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lang::{print_prop, Expr, ExprKind, Prop, PropKind, Statement};
use crate::numeric::NumericConfig;
use crate::unitdb::{UnitDb, UnitDbError};

pub use auto::auto_prove;
pub use dims::{check_dimensions, DimEntry, DimReport, DimStatus};
pub use engine::check_derivation;
pub use eval::{Env, EvalError, Evaluator, FnDef};
pub use fuzz::{soundness_fuzz, FuzzReport};
pub use ring::{ring_equal, RingError, RingOptions};
pub use script::{DerivationScript, ScriptError, Step};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error("definitions form a cycle: {}", .0.join(" -> "))]
    CyclicDefinitions(Vec<String>),
    #[error("malformed script at step {step}: {message}")]
    MalformedScript { step: usize, message: String },
    #[error(transparent)]
    Script(#[from] ScriptError),
    #[error(transparent)]
    UnitDb(#[from] UnitDbError),
    #[error("{0}")]
    Kind(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckerConfig {
    pub numeric: NumericConfig,
    pub ring: RingOptions,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        CheckerConfig {
            numeric: NumericConfig::default(),
            ring: RingOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Proof {
    pub trace: DerivationScript,
    /// Indices of steps whose decision rested on approximate values.
    pub approx_steps: Vec<usize>,
    /// Nonzero conditions the proof relies on, printed.
    pub side_conditions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    /// Variable values under which every hypothesis holds.
    pub env: Vec<(String, String)>,
    /// The subgoal found false.
    pub goal: String,
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    /// The open subgoal, printed.
    pub goal: String,
    pub locals: Vec<String>,
    /// Index of the step that could not be applied, if any.
    pub failed_step: Option<usize>,
    pub reason: String,
    /// Steps that did succeed before the failure.
    pub trace: DerivationScript,
    pub dim_report: Option<DimReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Proved(Proof),
    Refuted(Counterexample),
    Unknown(Residual),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Proved(_) => "proved",
            Verdict::Refuted(_) => "refuted",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }

    pub fn proof(&self) -> Option<&Proof> {
        match self {
            Verdict::Proved(p) => Some(p),
            _ => None,
        }
    }

    /// Human-readable summary, several lines.
    pub fn render(&self) -> String {
        match self {
            Verdict::Proved(p) => {
                let mut out = String::from("proved\n");
                for (i, s) in p.trace.steps.iter().enumerate() {
                    let flag = if p.approx_steps.contains(&i) {
                        "  [approx-decided]"
                    } else {
                        ""
                    };
                    out.push_str(&format!("  {i}: {s}{flag}\n"));
                }
                for c in &p.side_conditions {
                    out.push_str(&format!("  assuming {c}\n"));
                }
                out
            }
            Verdict::Refuted(c) => {
                let mut out = format!("refuted at step {}: {}\n", c.step, c.goal);
                for (k, v) in &c.env {
                    out.push_str(&format!("  {k} = {v}\n"));
                }
                out
            }
            Verdict::Unknown(r) => {
                let mut out = match r.failed_step {
                    Some(i) => format!("unknown: step {i} failed: {}\n", r.reason),
                    None => format!("unknown: {}\n", r.reason),
                };
                for l in &r.locals {
                    out.push_str(&format!("  {l}\n"));
                }
                out.push_str(&format!("  ⊢ {}\n", r.goal));
                if let Some(d) = &r.dim_report {
                    for e in d.issues() {
                        out.push_str(&format!("  {}: {}\n", e.name, e.status));
                    }
                }
                out
            }
        }
    }
}

/// A hypothesis `x = rhs` used to eliminate the scalar `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Definition {
    pub hyp: String,
    pub var: String,
    pub rhs: Expr,
}

/// Everything derived once per statement: the database with the
/// statement's constant overrides, variable dimensions, definitions and the
/// values they determine.
pub struct Context<'s> {
    pub stmt: &'s Statement,
    pub db: UnitDb,
    pub dims: dims::DimEnv,
    pub cfg: CheckerConfig,
    /// Dependencies first.
    pub defs: Vec<Definition>,
    pub env: Env,
}

impl<'s> Context<'s> {
    pub fn new(
        stmt: &'s Statement,
        base: &UnitDb,
        cfg: &CheckerConfig,
    ) -> Result<Context<'s>, CheckError> {
        let db = if stmt.meta.constants.is_empty() {
            base.clone()
        } else {
            base.with_constant_overrides(&stmt.meta.constants)?
        };
        let dims = dims::DimEnv::from_statement(stmt, &db).map_err(CheckError::Kind)?;
        let defs = definitions(stmt, &dims)?;
        let mut ctx = Context {
            stmt,
            db,
            dims,
            cfg: cfg.clone(),
            defs,
            env: Env::default(),
        };
        let mut env = Env {
            scalars: BTreeMap::new(),
            functions: function_definitions(stmt, &ctx.dims),
        };
        ctx.extend_env(&mut env);
        ctx.env = env;
        Ok(ctx)
    }

    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator::new(&self.db, &self.dims, &self.cfg.numeric)
    }

    /// Evaluates definitions, dependencies first, into `env`. Definitions
    /// that cannot be evaluated leave their variable unbound.
    pub fn extend_env(&self, env: &mut Env) {
        let ev = self.evaluator();
        for d in &self.defs {
            if env.scalars.contains_key(&d.var) {
                continue;
            }
            let target = self.dims.scalars[&d.var];
            if let Ok(q) = ev.eval_expecting(&d.rhs, env, target) {
                if q.dim == target {
                    env.bind(&d.var, q);
                }
            }
        }
    }

    /// `true` when a hypothesis holds by construction of the environment.
    pub fn is_defining(&self, h: &crate::lang::Hypothesis) -> bool {
        self.defs.iter().any(|d| d.hyp == h.name) || fn_definition(&h.prop, &self.dims).is_some()
    }
}

/// Scalar definitions in dependency order. A variable already defined by
/// an earlier hypothesis is not redefined.
pub fn definitions(stmt: &Statement, dims: &dims::DimEnv) -> Result<Vec<Definition>, CheckError> {
    let mut cands: Vec<Definition> = Vec::new();
    for h in stmt.all_hypotheses() {
        if let PropKind::Eq(l, r) = &h.prop.kind {
            if let ExprKind::Var(x) = &l.kind {
                if dims.scalars.contains_key(x)
                    && !r.mentions(x)
                    && !cands.iter().any(|d| &d.var == x)
                {
                    cands.push(Definition {
                        hyp: h.name.clone(),
                        var: x.clone(),
                        rhs: r.clone(),
                    });
                }
            }
        }
    }
    let deps: Vec<Vec<usize>> = cands
        .iter()
        .map(|d| {
            cands
                .iter()
                .enumerate()
                .filter(|(_, o)| d.rhs.mentions(&o.var))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; cands.len()];
    let mut order = Vec::new();
    fn visit(
        i: usize,
        deps: &[Vec<usize>],
        state: &mut [u8],
        order: &mut Vec<usize>,
        stack: &mut Vec<usize>,
    ) -> Result<(), Vec<usize>> {
        match state[i] {
            2 => return Ok(()),
            1 => {
                let pos = stack.iter().position(|&j| j == i).unwrap_or(0);
                let mut cycle = stack[pos..].to_vec();
                cycle.push(i);
                return Err(cycle);
            }
            _ => {}
        }
        state[i] = 1;
        stack.push(i);
        for &j in &deps[i] {
            visit(j, deps, state, order, stack)?;
        }
        stack.pop();
        state[i] = 2;
        order.push(i);
        Ok(())
    }
    for i in 0..cands.len() {
        visit(i, &deps, &mut state, &mut order, &mut Vec::new()).map_err(|cycle| {
            CheckError::CyclicDefinitions(cycle.iter().map(|&j| cands[j].var.clone()).collect())
        })?;
    }
    Ok(order.into_iter().map(|i| cands[i].clone()).collect())
}

/// `∀ s, f(s) = body` with `f` a function variable not used in `body`.
pub fn fn_definition(p: &Prop, dims: &dims::DimEnv) -> Option<(String, FnDef)> {
    let PropKind::ForallFn { var, body, .. } = &p.kind else {
        return None;
    };
    let PropKind::Eq(l, r) = &body.kind else {
        return None;
    };
    let ExprKind::Apply(f, arg) = &l.kind else {
        return None;
    };
    if !matches!(&arg.kind, ExprKind::Var(s) if s == var)
        || !dims.functions.contains_key(f)
        || r.mentions(f)
    {
        return None;
    }
    Some((
        f.clone(),
        FnDef {
            param: var.clone(),
            body: r.clone(),
        },
    ))
}

pub fn function_definitions(stmt: &Statement, dims: &dims::DimEnv) -> BTreeMap<String, FnDef> {
    let mut out = BTreeMap::new();
    for h in stmt.all_hypotheses() {
        if let Some((f, def)) = fn_definition(&h.prop, dims) {
            out.entry(f).or_insert(def);
        }
    }
    out
}

/// Values fixed by the statement's definitions, for display and tests.
pub fn defined_values(
    stmt: &Statement,
    db: &UnitDb,
    cfg: &CheckerConfig,
) -> Result<Env, CheckError> {
    Ok(Context::new(stmt, db, cfg)?.env)
}

pub(crate) fn print_local(name: &str, p: &Prop) -> String {
    format!("{name} : {}", print_prop(p))
}
