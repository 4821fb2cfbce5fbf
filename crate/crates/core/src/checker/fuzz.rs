//! Randomized soundness checking: instantiate the free variables, keep the
//! samples that satisfy every hypothesis, and evaluate the goal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CheckError, CheckerConfig, Context};
use crate::dimension::Dimension;
use crate::lang::{Hypothesis, Statement};
use crate::numeric::NumericValue;
use crate::quantity::Quantity;
use crate::unitdb::UnitDb;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FuzzReport {
    pub samples: usize,
    /// Hypotheses hold and the goal holds.
    pub consistent: usize,
    /// Some hypothesis is false for the sample.
    pub rejected: usize,
    /// Something could not be evaluated.
    pub unevaluable: usize,
    /// Hypotheses hold and the goal is false.
    pub falsified: Vec<Vec<(String, String)>>,
}

/// Samples `n` assignments of the undefined scalar variables with positive
/// rationals, then derives defined variables from their definitions.
pub fn soundness_fuzz(
    stmt: &Statement,
    db: &UnitDb,
    cfg: &CheckerConfig,
    n: usize,
    seed: u64,
) -> Result<FuzzReport, CheckError> {
    let ctx = Context::new(stmt, db, cfg)?;
    let free: Vec<(String, Dimension)> = ctx
        .dims
        .scalars
        .iter()
        .filter(|(v, _)| !ctx.defs.iter().any(|d| &d.var == *v))
        .map(|(v, d)| (v.clone(), *d))
        .collect();
    let all = stmt.all_hypotheses();
    let hyps: Vec<Hypothesis> = all.iter().filter(|h| !ctx.is_defining(h)).cloned().collect();
    let ev = ctx.evaluator();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FuzzReport {
        samples: n,
        ..FuzzReport::default()
    };
    'sample: for _ in 0..n {
        let mut env = super::Env {
            scalars: Default::default(),
            functions: ctx.env.functions.clone(),
        };
        let mut sample = |env: &mut super::Env, v: &str, d: Dimension| {
            let num = rng.gen_range(1..=60);
            let den = rng.gen_range(1..=12);
            env.bind(v, Quantity::new(NumericValue::ratio(num, den), d));
        };
        for (v, d) in &free {
            sample(&mut env, v, *d);
        }
        ctx.extend_env(&mut env);
        // A definition that reaches its own variable through a function
        // body cannot be evaluated; sample the variable and check the
        // definition like any other hypothesis.
        let mut checked: Vec<&Hypothesis> = hyps.iter().collect();
        while let Some(d) = ctx.defs.iter().find(|d| !env.scalars.contains_key(&d.var)) {
            sample(&mut env, &d.var, ctx.dims.scalars[&d.var]);
            ctx.extend_env(&mut env);
            checked.extend(all.iter().filter(|h| h.name == d.hyp));
        }
        for h in checked {
            match ev.eval_prop(&h.prop, &env) {
                Ok(t) if t.value => {}
                Ok(_) => {
                    report.rejected += 1;
                    continue 'sample;
                }
                Err(_) => {
                    report.unevaluable += 1;
                    continue 'sample;
                }
            }
        }
        match ev.eval_prop(&stmt.goal, &env) {
            Ok(t) if t.value => report.consistent += 1,
            Ok(_) => report.falsified.push(env.render()),
            Err(_) => report.unevaluable += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_statement;

    #[test]
    fn true_identity_is_never_falsified() {
        let s = parse_statement(
            "theorem t (m_1 m_2 : Mass) (a : Acceleration) (ha : a = m_2 * g / (m_1 + m_2)) : a * (m_1 + m_2) = m_2 * g",
        )
        .unwrap();
        let r = soundness_fuzz(&s, UnitDb::shared(), &CheckerConfig::default(), 100, 7).unwrap();
        assert_eq!(r.consistent, 100);
    }

    #[test]
    fn false_claim_is_caught() {
        let s = parse_statement("theorem t (x y : Real) (h : 0 < x) : x * y = y").unwrap();
        let r = soundness_fuzz(&s, UnitDb::shared(), &CheckerConfig::default(), 50, 1).unwrap();
        assert!(!r.falsified.is_empty());
    }
}
