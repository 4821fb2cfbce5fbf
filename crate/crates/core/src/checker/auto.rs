//! Fixed proof-search strategy.
//!
//! Definitions are substituted (dependents first), conjunctions split,
//! implications and quantifiers introduced, finite domains case-split. Each
//! leaf is tried with a hypothesis match, exact evaluation, field
//! normalization and, when function equalities are present, coefficient
//! matching followed by field normalization again. Every successful step is
//! recorded so the result replays through [`check_derivation`].
//!
//! [`check_derivation`]: super::check_derivation

use super::engine::{precheck, Engine, Outcome};
use super::script::Step;
use super::{CheckError, CheckerConfig, Verdict};
use crate::lang::{print_expr, ExprKind, PropKind, Statement};
use crate::unitdb::UnitDb;

pub fn auto_prove(
    stmt: &Statement,
    db: &UnitDb,
    cfg: &CheckerConfig,
) -> Result<Verdict, CheckError> {
    let ctx = match precheck(stmt, db, cfg)? {
        Ok(c) => c,
        Err(v) => return Ok(v),
    };
    let mut eng = Engine::new(&ctx);
    for d in ctx.defs.iter().rev() {
        if let Outcome::Refuted(c) = eng.apply(&Step::Subst(d.hyp.clone()))? {
            return Ok(Verdict::Refuted(c));
        }
    }
    Ok(match solve(&mut eng)? {
        Some(v) => v,
        None => Verdict::Proved(eng.proof()),
    })
}

fn progress(eng: &mut Engine, step: Step) -> Result<Result<(), Verdict>, CheckError> {
    let idx = eng.trace.len();
    Ok(match eng.apply(&step)? {
        Outcome::Progress => Ok(()),
        Outcome::Failed(r) => Err(Verdict::Unknown(eng.residual(Some(idx), r))),
        Outcome::Refuted(c) => Err(Verdict::Refuted(c)),
    })
}

/// Closes the focused goal and everything it splits into, or returns the
/// verdict that stopped the search.
fn solve(eng: &mut Engine) -> Result<Option<Verdict>, CheckError> {
    let target = eng.goals[0].target.clone();
    match &target.kind {
        PropKind::And(..) => {
            if let Err(v) = progress(eng, Step::Split)? {
                return Ok(Some(v));
            }
            if let Some(v) = solve(eng)? {
                return Ok(Some(v));
            }
            solve(eng)
        }
        PropKind::Implies(..) => {
            let name = eng.fresh_local("h_intro");
            if let Err(v) = progress(eng, Step::Intro(Some(name)))? {
                return Ok(Some(v));
            }
            solve(eng)
        }
        PropKind::ForallFn { var, .. } => {
            let name = eng.fresh_var(var);
            if let Err(v) = progress(eng, Step::Intro(Some(name)))? {
                return Ok(Some(v));
            }
            solve(eng)
        }
        PropKind::ForallFinite { var, values, .. } => {
            let name = eng.fresh_var(var);
            if let Err(v) = progress(eng, Step::Intro(Some(name.clone())))? {
                return Ok(Some(v));
            }
            let values: Vec<String> = values.iter().map(print_expr).collect();
            let n = values.len();
            if let Err(v) = progress(eng, Step::CaseSplit { var: name, values })? {
                return Ok(Some(v));
            }
            for _ in 0..n {
                if let Some(v) = solve(eng)? {
                    return Ok(Some(v));
                }
            }
            Ok(None)
        }
        _ => leaf(eng),
    }
}

fn leaf(eng: &mut Engine) -> Result<Option<Verdict>, CheckError> {
    let g = eng.goals[0].clone();
    if let Some(l) = g.locals.iter().find(|l| l.prop == g.target) {
        if let Outcome::Progress = eng.apply(&Step::ExactHyp(l.name.clone()))? {
            return Ok(None);
        }
    }
    match eng.apply(&Step::NumericCheck)? {
        Outcome::Progress => return Ok(None),
        Outcome::Refuted(c) => return Ok(Some(Verdict::Refuted(c))),
        Outcome::Failed(_) => {}
    }
    let mut reason = match eng.apply(&Step::RingCheck)? {
        Outcome::Progress => return Ok(None),
        Outcome::Failed(r) => r,
        Outcome::Refuted(c) => return Ok(Some(Verdict::Refuted(c))),
    };
    let fn_eqs: Vec<String> = g
        .locals
        .iter()
        .filter(|l| match &l.prop.kind {
            PropKind::Eq(a, b) => [a, b].iter().all(|e| {
                matches!(&e.kind, ExprKind::Var(v) if eng.ctx.dims.functions.contains_key(v))
            }),
            _ => false,
        })
        .map(|l| l.name.clone())
        .collect();
    let mut matched = false;
    for h in fn_eqs {
        let var = poly_var(eng, &h);
        if let Outcome::Progress = eng.apply(&Step::PolyMatch { hyp: h, var })? {
            matched = true;
        }
    }
    if matched {
        match eng.apply(&Step::RingCheck)? {
            Outcome::Progress => return Ok(None),
            Outcome::Failed(r) => reason = r,
            Outcome::Refuted(c) => return Ok(Some(Verdict::Refuted(c))),
        }
    }
    let idx = eng.trace.len();
    Ok(Some(Verdict::Unknown(eng.residual(Some(idx), reason))))
}

/// A name for the polynomial variable: the bound variable of the first
/// function's definition, or `t`.
fn poly_var(eng: &Engine, h: &str) -> String {
    let g = &eng.goals[0];
    let Some(PropKind::Eq(a, _)) = g.local(h).map(|l| &l.prop.kind) else {
        return "t".into();
    };
    let ExprKind::Var(f) = &a.kind else {
        return "t".into();
    };
    g.locals
        .iter()
        .filter_map(|l| super::fn_definition(&l.prop, &eng.ctx.dims))
        .find(|(n, _)| n == f)
        .map(|(_, d)| d.param)
        .unwrap_or_else(|| "t".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::check_derivation;
    use crate::lang::parse_statement;

    fn auto(src: &str) -> Verdict {
        let s = parse_statement(src).unwrap();
        auto_prove(&s, UnitDb::shared(), &CheckerConfig::default()).unwrap()
    }

    fn replays(src: &str, v: &Verdict) {
        let s = parse_statement(src).unwrap();
        let p = v.proof().unwrap();
        let again = check_derivation(&s, &p.trace, UnitDb::shared(), &CheckerConfig::default()).unwrap();
        assert_eq!(&again, v);
    }

    #[test]
    fn ring_only_proof() {
        let src = "theorem t (T : Force) (m_1 m_2 : Mass) (a : Acceleration) (ha : a = m_2 * g / (m_1 + m_2)) (hT : T = m_1 * m_2 / (m_1 + m_2) * g) : a = m_2 / (m_1 + m_2) * g ∧ T = m_1 * m_2 / (m_1 + m_2) * g";
        let v = auto(src);
        let p = v.proof().expect("proved");
        assert!(!p.trace.steps.contains(&Step::NumericCheck));
        replays(src, &v);
    }

    #[test]
    fn numeric_proof_and_refutation() {
        let v = auto("theorem t (x : Length) (hx : x = milli(2.5 • meter)) : x = 0.0025 • meter");
        assert!(v.is_proved());
        let v = auto("theorem t (x : Length) (hx : x = milli(2.5 • meter)) : x = 0.025 • meter");
        assert!(matches!(v, Verdict::Refuted(_)));
    }

    #[test]
    fn dimension_errors_stop_the_search() {
        let v = auto("theorem t (x : Length) (m : Mass) (h : x = m) : x = x");
        let Verdict::Unknown(r) = v else { panic!() };
        assert!(r.dim_report.is_some());
    }

    #[test]
    fn coefficient_matching() {
        let src = "theorem t (a : Acceleration) (v0 : Speed) (x y : Time → Length) (hx : ∀ s, x(s) = a * s**2 / 2 + v0 * s) (hy : ∀ s, y(s) = (3 • meter / second**2) * s**2 - 2 • meter / second * s) (h : x = y) : a = 6 • meter / second**2 ∧ v0 = -2 • meter / second";
        let v = auto(src);
        assert!(v.is_proved(), "{}", v.render());
        replays(src, &v);
    }
}
