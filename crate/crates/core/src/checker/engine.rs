//! Goal states and the step executor shared by scripts and the automatic
//! prover.

use std::collections::BTreeMap;

use super::dims::{check_dimensions, is_polymorphic, kind_dim, synth, DimEnv, Ty};
use super::poly::{gcd, RatFunc};
use super::ring::Normalizer;
use super::script::{DerivationScript, Step};
use super::subst::{instantiate, rewrite_expr, rewrite_prop};
use super::{
    fn_definition, print_local, CheckError, CheckerConfig, Context, Counterexample, Proof,
    Residual, Verdict,
};
use crate::dimension::Dimension;
use crate::lang::{
    parse_expr, print_expr, print_prop, DeclKind, Expr, ExprKind, KindExpr, Prop, PropKind, Scope,
    Statement,
};
use crate::unitdb::UnitDb;

#[derive(Debug, Clone, PartialEq)]
pub struct Local {
    pub name: String,
    pub prop: Prop,
}

/// A variable introduced from a quantifier.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundVar {
    pub name: String,
    pub dim: Dimension,
    pub kind: Option<KindExpr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Goal {
    pub locals: Vec<Local>,
    pub target: Prop,
    pub vars: Vec<BoundVar>,
    /// Finite domains of introduced variables.
    pub domains: BTreeMap<String, Vec<Expr>>,
}

impl Goal {
    fn with_target(&self, target: Prop) -> Goal {
        Goal {
            target,
            ..self.clone()
        }
    }

    pub fn local(&self, name: &str) -> Option<&Local> {
        self.locals.iter().find(|l| l.name == name)
    }
}

pub enum Outcome {
    Progress,
    Failed(String),
    Refuted(Counterexample),
}

struct Effect {
    replace: Vec<Goal>,
    approx: bool,
    side: Vec<String>,
}

impl Effect {
    fn goals(replace: Vec<Goal>) -> Effect {
        Effect {
            replace,
            approx: false,
            side: Vec::new(),
        }
    }
}

enum StepResult {
    Done(Effect),
    Failed(String),
    Refuted(Counterexample),
}

use StepResult::{Done, Failed};

pub struct Engine<'c, 's> {
    pub ctx: &'c Context<'s>,
    pub goals: Vec<Goal>,
    pub trace: Vec<Step>,
    pub approx_steps: Vec<usize>,
    pub side_conditions: Vec<String>,
}

impl<'c, 's> Engine<'c, 's> {
    pub fn new(ctx: &'c Context<'s>) -> Self {
        let locals = ctx
            .stmt
            .all_hypotheses()
            .into_iter()
            .map(|h| Local {
                name: h.name,
                prop: h.prop,
            })
            .collect();
        Engine {
            ctx,
            goals: vec![Goal {
                locals,
                target: ctx.stmt.goal.clone(),
                vars: Vec::new(),
                domains: BTreeMap::new(),
            }],
            trace: Vec::new(),
            approx_steps: Vec::new(),
            side_conditions: Vec::new(),
        }
    }

    pub fn is_done(&self) -> bool {
        self.goals.is_empty()
    }

    pub fn focus(&self) -> Option<&Goal> {
        self.goals.first()
    }

    pub fn proof(&self) -> Proof {
        Proof {
            trace: DerivationScript {
                steps: self.trace.clone(),
            },
            approx_steps: self.approx_steps.clone(),
            side_conditions: self.side_conditions.clone(),
        }
    }

    pub fn residual(&self, failed_step: Option<usize>, reason: impl Into<String>) -> Residual {
        let (goal, locals) = match self.goals.first() {
            Some(g) => (
                print_prop(&g.target),
                g.locals.iter().map(|l| print_local(&l.name, &l.prop)).collect(),
            ),
            None => (String::new(), Vec::new()),
        };
        Residual {
            goal,
            locals,
            failed_step,
            reason: reason.into(),
            trace: DerivationScript {
                steps: self.trace.clone(),
            },
            dim_report: None,
        }
    }

    /// `{prefix}{n}` for the least `n ≥ 1` not naming a local.
    pub fn fresh_local(&self, prefix: &str) -> String {
        let g = &self.goals[0];
        (1..)
            .map(|n| format!("{prefix}{n}"))
            .find(|n| g.local(n).is_none())
            .expect("unbounded")
    }

    fn taken(&self, g: &Goal, name: &str) -> bool {
        self.ctx.dims.scalars.contains_key(name)
            || self.ctx.dims.functions.contains_key(name)
            || g.vars.iter().any(|v| v.name == name)
    }

    /// `base`, primed until it names nothing in scope.
    pub fn fresh_var(&self, base: &str) -> String {
        let g = &self.goals[0];
        let mut n = base.to_string();
        while self.taken(g, &n) {
            n.push('\'');
        }
        n
    }

    fn dims_for(&self, g: &Goal) -> DimEnv {
        let mut d = self.ctx.dims.clone();
        for v in &g.vars {
            d.scalars.insert(v.name.clone(), v.dim);
        }
        d
    }

    fn scope_for(&self, g: &Goal) -> Scope {
        let mut s = Scope::from_statement(self.ctx.stmt);
        for v in &g.vars {
            s.push_scalar(&v.name);
        }
        s
    }

    fn malformed(&self, message: impl Into<String>) -> CheckError {
        CheckError::MalformedScript {
            step: self.trace.len(),
            message: message.into(),
        }
    }

    fn need_local<'g>(&self, g: &'g Goal, name: &str) -> Result<&'g Local, CheckError> {
        g.local(name)
            .ok_or_else(|| self.malformed(format!("no hypothesis named `{name}`")))
    }

    fn parse_in(&self, g: &Goal, text: &str) -> Result<Expr, CheckError> {
        parse_expr(text, &self.scope_for(g), &self.ctx.db)
            .map_err(|e| self.malformed(format!("in `{text}`: {e}")))
    }

    /// Applies one step to the focused goal. Failed steps leave the state
    /// unchanged and are not recorded.
    pub fn apply(&mut self, step: &Step) -> Result<Outcome, CheckError> {
        let Some(g) = self.goals.first().cloned() else {
            return Err(self.malformed("no open goals"));
        };
        let res = match step {
            Step::Split => self.split(&g),
            Step::Intro(name) => self.intro(&g, name.as_deref())?,
            Step::CaseSplit { var, values } => self.case_split(&g, var, values)?,
            Step::Subst(h) => self.subst(&g, h)?,
            Step::Instantiate { hyp, arg, name } => self.instantiate(&g, hyp, arg, name.as_deref())?,
            Step::PolyMatch { hyp, var } => self.poly_match(&g, hyp, var)?,
            Step::RingCheck => self.ring(&g),
            Step::NumericCheck => self.numeric(&g),
            Step::ExactHyp(h) => {
                let l = self.need_local(&g, h)?;
                if l.prop == g.target {
                    Done(Effect::goals(vec![]))
                } else {
                    Failed(format!("`{h}` is not the goal"))
                }
            }
        };
        Ok(match res {
            Done(eff) => {
                let idx = self.trace.len();
                self.goals.splice(0..1, eff.replace);
                if eff.approx {
                    self.approx_steps.push(idx);
                }
                for s in eff.side {
                    if !self.side_conditions.contains(&s) {
                        self.side_conditions.push(s);
                    }
                }
                self.trace.push(step.clone());
                Outcome::Progress
            }
            Failed(r) => Outcome::Failed(r),
            StepResult::Refuted(c) => Outcome::Refuted(c),
        })
    }

    fn split(&self, g: &Goal) -> StepResult {
        match &g.target.kind {
            PropKind::And(a, b) => Done(Effect::goals(vec![
                g.with_target((**a).clone()),
                g.with_target((**b).clone()),
            ])),
            _ => Failed("goal is not a conjunction".into()),
        }
    }

    fn intro(&self, g: &Goal, name: Option<&str>) -> Result<StepResult, CheckError> {
        let bind = |var: &str, dim: Dimension, kind: Option<KindExpr>, body: &Prop| {
            let new = match name {
                Some(n) => n.to_string(),
                None => self.fresh_var(var),
            };
            if new != var && self.taken(g, &new) {
                return Err(format!("`{new}` is already in scope"));
            }
            let mut goal = g.clone();
            goal.target = if new == var {
                body.clone()
            } else {
                rewrite_prop(body, &Expr::var(var), &Expr::var(&new))
            };
            goal.vars.push(BoundVar {
                name: new.clone(),
                dim,
                kind,
            });
            Ok((goal, new))
        };
        Ok(match &g.target.kind {
            PropKind::Implies(p, q) => {
                let n = name
                    .map(str::to_string)
                    .unwrap_or_else(|| self.fresh_local("h_intro"));
                if g.local(&n).is_some() {
                    return Ok(Failed(format!("`{n}` already names a hypothesis")));
                }
                let mut goal = g.with_target((**q).clone());
                goal.locals.push(Local {
                    name: n,
                    prop: (**p).clone(),
                });
                Done(Effect::goals(vec![goal]))
            }
            PropKind::ForallFn { var, kind, body } => {
                let dim = match self.dims_for(g).bound_dim(var, kind.as_ref(), body, &self.ctx.db) {
                    Ok(d) => d,
                    Err(m) => return Ok(Failed(m)),
                };
                match bind(var, dim, kind.clone(), body) {
                    Ok((goal, _)) => Done(Effect::goals(vec![goal])),
                    Err(m) => Failed(m),
                }
            }
            PropKind::ForallFinite {
                var,
                kind,
                values,
                body,
            } => {
                let dim = match kind {
                    Some(k) => match kind_dim(k, &self.ctx.db) {
                        Ok(d) => d,
                        Err(m) => return Ok(Failed(m)),
                    },
                    None => Dimension::dimensionless(),
                };
                match bind(var, dim, kind.clone(), body) {
                    Ok((mut goal, new)) => {
                        goal.domains.insert(new, values.clone());
                        Done(Effect::goals(vec![goal]))
                    }
                    Err(m) => Failed(m),
                }
            }
            _ => Failed("goal is neither an implication nor a quantifier".into()),
        })
    }

    fn case_split(
        &self,
        g: &Goal,
        var: &str,
        values: &[String],
    ) -> Result<StepResult, CheckError> {
        let Some(domain) = g.domains.get(var) else {
            if g.vars.iter().any(|v| v.name == var) || self.ctx.dims.scalars.contains_key(var) {
                return Ok(Failed(format!("`{var}` has no finite domain")));
            }
            return Err(self.malformed(format!("no variable named `{var}`")));
        };
        let parsed: Vec<Expr> = values
            .iter()
            .map(|v| self.parse_in(g, v))
            .collect::<Result<_, _>>()?;
        let printed: Vec<String> = parsed.iter().map(print_expr).collect();
        if let Some(missing) = domain.iter().find(|d| !printed.contains(&print_expr(d))) {
            return Ok(Failed(format!(
                "case split misses the value {}",
                print_expr(missing)
            )));
        }
        let pat = Expr::var(var);
        let goals = parsed
            .iter()
            .map(|v| {
                let mut goal = g.clone();
                goal.target = instantiate(&g.target, var, v);
                for l in &mut goal.locals {
                    l.prop = rewrite_prop(&l.prop, &pat, v);
                }
                goal.vars.retain(|b| b.name != var);
                goal.domains.remove(var);
                goal
            })
            .collect();
        Ok(Done(Effect::goals(goals)))
    }

    fn subst(&self, g: &Goal, h: &str) -> Result<StepResult, CheckError> {
        let l = self.need_local(g, h)?;
        let PropKind::Eq(lhs, rhs) = &l.prop.kind else {
            return Ok(Failed(format!("`{h}` is not an equation")));
        };
        let mut occurs = false;
        rhs.visit(&mut |e| occurs |= e == lhs);
        if occurs || matches!(&lhs.kind, ExprKind::Var(x) if rhs.mentions(x)) {
            return Ok(Failed(format!("`{h}` is recursive")));
        }
        let dims = self.dims_for(g);
        let mut rep = rhs.clone();
        if let ExprKind::Var(x) = &lhs.kind {
            if dims.functions.contains_key(x) {
                return Ok(Failed("cannot substitute a function variable".into()));
            }
            if is_polymorphic(rhs, &dims, &self.ctx.db) {
                let kind = match self.ctx.stmt.decl(x).map(|d| &d.kind) {
                    Some(DeclKind::Scalar(k)) => Some(k.clone()),
                    _ => g.vars.iter().find(|v| &v.name == x).and_then(|v| v.kind.clone()),
                };
                if let Some(k) = kind {
                    rep = Expr::synth(ExprKind::Cast(Box::new(rhs.clone()), k));
                }
            }
        }
        let mut goal = g.clone();
        goal.target = rewrite_prop(&g.target, lhs, &rep);
        for other in &mut goal.locals {
            if other.name != h {
                other.prop = rewrite_prop(&other.prop, lhs, &rep);
            }
        }
        for vals in goal.domains.values_mut() {
            for v in vals.iter_mut() {
                *v = rewrite_expr(v, lhs, &rep);
            }
        }
        Ok(Done(Effect::goals(vec![goal])))
    }

    fn instantiate(
        &self,
        g: &Goal,
        hyp: &str,
        arg: &str,
        name: Option<&str>,
    ) -> Result<StepResult, CheckError> {
        let l = self.need_local(g, hyp)?;
        let arg = self.parse_in(g, arg)?;
        let PropKind::ForallFn { var, kind, body } = &l.prop.kind else {
            return Ok(Failed(format!("`{hyp}` is not universally quantified")));
        };
        let dims = self.dims_for(g);
        let want = match dims.bound_dim(var, kind.as_ref(), body, &self.ctx.db) {
            Ok(d) => d,
            Err(m) => return Ok(Failed(m)),
        };
        match synth(&arg, &dims, &self.ctx.db) {
            Ok(Ty::Dim(d)) if d != want => {
                return Ok(Failed(format!(
                    "argument has dimension {d}, expected {want}"
                )))
            }
            Ok(Ty::Function(..)) => return Ok(Failed("argument is a function".into())),
            Err(s) => return Ok(Failed(s.to_string())),
            _ => {}
        }
        let prop = instantiate(body, var, &arg);
        if let Some(inner) = capture_left(body, var, &arg) {
            return Ok(Failed(format!("`{inner}` would be captured")));
        }
        let n = name
            .map(str::to_string)
            .unwrap_or_else(|| self.fresh_local("h_inst"));
        if g.local(&n).is_some() {
            return Ok(Failed(format!("`{n}` already names a hypothesis")));
        }
        let mut goal = g.clone();
        goal.locals.push(Local { name: n, prop });
        Ok(Done(Effect::goals(vec![goal])))
    }

    fn poly_match(&self, g: &Goal, hyp: &str, var: &str) -> Result<StepResult, CheckError> {
        let l = self.need_local(g, hyp)?;
        let (f, h) = match &l.prop.kind {
            PropKind::Eq(a, b) => match (&a.kind, &b.kind) {
                (ExprKind::Var(f), ExprKind::Var(h))
                    if self.ctx.dims.functions.contains_key(f)
                        && self.ctx.dims.functions.contains_key(h) =>
                {
                    (f.clone(), h.clone())
                }
                _ => return Ok(Failed(format!("`{hyp}` is not an equation of functions"))),
            },
            _ => return Ok(Failed(format!("`{hyp}` is not an equation of functions"))),
        };
        let dims = self.dims_for(g);
        let def_of = |name: &str| {
            g.locals
                .iter()
                .filter_map(|l| fn_definition(&l.prop, &dims))
                .find(|(n, _)| n == name)
                .map(|(_, d)| d)
        };
        let (Some(df), Some(dh)) = (def_of(&f), def_of(&h)) else {
            return Ok(Failed(format!("`{f}` or `{h}` has no pointwise definition")));
        };
        let x = Expr::var(&format!("§{var}"));
        let bf = rewrite_expr(&df.body, &Expr::var(&df.param), &x);
        let bh = rewrite_expr(&dh.body, &Expr::var(&dh.param), &x);
        let mut n = Normalizer::new(&self.ctx.db, self.ctx.cfg.ring);
        let xi = n.atoms.intern(&x);
        let (rf, rh) = match (n.convert(&bf), n.convert(&bh)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return Ok(Failed(e.to_string())),
        };
        for i in 0..n.atoms.len() {
            if i != xi && n.atoms.expr(i).mentions(&format!("§{var}")) {
                return Ok(Failed(format!(
                    "not polynomial in {var}: {}",
                    print_expr(n.atoms.expr(i))
                )));
            }
        }
        if rf.den.mentions(xi) || rh.den.mentions(xi) {
            return Ok(Failed(format!("not polynomial in {var}")));
        }
        let top = rf.num.degree_in(xi).max(rh.num.degree_in(xi));
        let mut goal = g.clone();
        let mut count = 0;
        for k in 0..=top {
            let (cf, ch) = (rf.num.coeff_in(xi, k), rh.num.coeff_in(xi, k));
            if cf.is_zero() && ch.is_zero() {
                continue;
            }
            let a = RatFunc::new(cf, rf.den.clone()).expect("nonzero denominator");
            let b = RatFunc::new(ch, rh.den.clone()).expect("nonzero denominator");
            let name = (1..)
                .map(|i| format!("h_c{i}"))
                .find(|c| goal.local(c).is_none())
                .expect("unbounded");
            goal.locals.push(Local {
                name,
                prop: Prop::eq(n.ratfunc_expr(&a), n.ratfunc_expr(&b)),
            });
            count += 1;
        }
        if count == 0 {
            return Ok(Failed("both functions are identically zero".into()));
        }
        Ok(Done(Effect::goals(vec![goal])))
    }

    fn ring(&self, g: &Goal) -> StepResult {
        let PropKind::Eq(a, b) = &g.target.kind else {
            return Failed("ring closes only equations".into());
        };
        let mut n = Normalizer::new(&self.ctx.db, self.ctx.cfg.ring);
        let diff = match (n.convert(a), n.convert(b)) {
            (Ok(x), Ok(y)) => x.sub(&y),
            (Err(e), _) | (_, Err(e)) => return Failed(e.to_string()),
        };
        let nonzero = |e: &Expr| format!("{} ≠ 0", print_expr(e));
        if diff.is_zero() {
            let mut eff = Effect::goals(vec![]);
            eff.side = n.divisors.iter().map(nonzero).collect();
            return Done(eff);
        }
        let goal_divisors = n.divisors.len();
        let dims = self.dims_for(g);
        for l in &g.locals {
            let PropKind::Eq(hl, hr) = &l.prop.kind else {
                continue;
            };
            if matches!(synth(hl, &dims, &self.ctx.db), Ok(Ty::Function(..)) | Err(_)) {
                continue;
            }
            n.divisors.truncate(goal_divisors);
            let h = match (n.convert(hl), n.convert(hr)) {
                (Ok(x), Ok(y)) => x.sub(&y),
                _ => continue,
            };
            if h.is_zero() {
                continue;
            }
            let d = gcd(&diff.num.mul(&h.den), &h.num);
            if d.is_constant() {
                continue;
            }
            let r = h.num.div_exact(&d).expect("gcd divides");
            let mut side: Vec<String> = n.divisors.iter().map(nonzero).collect();
            if !r.is_constant() {
                side.push(nonzero(&n.poly_expr(&r.integer_primitive())));
            }
            let mut eff = Effect::goals(vec![]);
            eff.side = side;
            return Done(eff);
        }
        Failed("not a field identity, even modulo one local equation".into())
    }

    fn numeric(&self, g: &Goal) -> StepResult {
        let dims = self.dims_for(g);
        let ev = super::Evaluator::new(&self.ctx.db, &dims, &self.ctx.cfg.numeric);
        let env = &self.ctx.env;
        let t = match ev.eval_prop(&g.target, env) {
            Ok(t) => t,
            Err(e) => return Failed(e.to_string()),
        };
        if t.value {
            let mut eff = Effect::goals(vec![]);
            eff.approx = t.approx;
            return Done(eff);
        }
        let holds = |p: &Prop| {
            fn_definition(p, &dims).is_some()
                || matches!(ev.eval_prop(p, env), Ok(t) if t.value)
        };
        let hyps_hold = self.ctx.stmt.all_hypotheses().iter().all(|h| holds(&h.prop))
            && g.locals.iter().all(|l| holds(&l.prop));
        if hyps_hold && !t.approx {
            return StepResult::Refuted(Counterexample {
                env: env.render(),
                goal: print_prop(&g.target),
                step: self.trace.len(),
            });
        }
        Failed(if t.approx {
            "goal is false within tolerance".into()
        } else {
            "goal is false, but the hypotheses could not all be confirmed".into()
        })
    }
}

/// A variable of `arg` that a quantifier inside `body` would capture.
fn capture_left(body: &Prop, var: &str, arg: &Expr) -> Option<String> {
    match &body.kind {
        PropKind::ForallFn { var: v, body: b, .. }
        | PropKind::ForallFinite { var: v, body: b, .. } => {
            if v != var && b.mentions(var) && arg.mentions(v) {
                Some(v.clone())
            } else {
                capture_left(b, var, arg)
            }
        }
        PropKind::And(a, b) | PropKind::Or(a, b) | PropKind::Implies(a, b) => {
            capture_left(a, var, arg).or_else(|| capture_left(b, var, arg))
        }
        _ => None,
    }
}

fn dimension_failure(stmt: &Statement, ctx: &Context) -> Option<Verdict> {
    let report = check_dimensions(stmt, &ctx.db);
    if report.is_homogeneous() {
        return None;
    }
    Some(Verdict::Unknown(Residual {
        goal: print_prop(&stmt.goal),
        locals: Vec::new(),
        failed_step: None,
        reason: "dimension check failed".into(),
        trace: DerivationScript::default(),
        dim_report: Some(report),
    }))
}

pub(crate) fn precheck<'s>(
    stmt: &'s Statement,
    db: &UnitDb,
    cfg: &CheckerConfig,
) -> Result<Result<Context<'s>, Verdict>, CheckError> {
    let ctx = Context::new(stmt, db, cfg)?;
    Ok(match dimension_failure(stmt, &ctx) {
        Some(v) => Err(v),
        None => Ok(ctx),
    })
}

/// Replays `script` against `stmt`.
pub fn check_derivation(
    stmt: &Statement,
    script: &DerivationScript,
    db: &UnitDb,
    cfg: &CheckerConfig,
) -> Result<Verdict, CheckError> {
    let ctx = match precheck(stmt, db, cfg)? {
        Ok(c) => c,
        Err(v) => return Ok(v),
    };
    let mut eng = Engine::new(&ctx);
    for (i, step) in script.steps.iter().enumerate() {
        match eng.apply(step)? {
            Outcome::Progress => {}
            Outcome::Failed(reason) => return Ok(Verdict::Unknown(eng.residual(Some(i), reason))),
            Outcome::Refuted(c) => return Ok(Verdict::Refuted(c)),
        }
    }
    Ok(if eng.is_done() {
        Verdict::Proved(eng.proof())
    } else {
        Verdict::Unknown(eng.residual(None, "open goals remain"))
    })
}
