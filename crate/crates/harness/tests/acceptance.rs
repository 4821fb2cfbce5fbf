//! Acceptance criteria, one PASS/FAIL line each.
//!
//! `cargo test -p physkernel-harness --test acceptance`

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use physkernel::checker::dims::DimEnv;
use physkernel::checker::{
    auto_prove, check_dimensions, defined_values, function_definitions, ring_equal,
    soundness_fuzz, CheckerConfig, DimStatus, Env, Evaluator, RingOptions, Verdict,
};
use physkernel::corpus::{load_corpus, CorpusEntry};
use physkernel::lang::{ast_eq, parse_expr, parse_statement, print_statement, Scope, Statement};
use physkernel::numeric::NumericValue;
use physkernel::quantity::{q_add, q_mul, q_smul, q_val, Quantity};
use physkernel::unitdb::UnitDb;
use physkernel_harness::rates::percent_digits;
use physkernel_harness::{aggregate, level_row, run_eval, EvalOptions, Line, ProverBinding, Tally};

/// Exact-rational tolerance for the approximate rpow comparison.
const REL_TOLERANCE: f64 = 1e-30;
/// At least 50 significant digits.
const MIN_PRECISION_BITS: usize = 167;
const STATEMENT_BUDGET: Duration = Duration::from_secs(1);
const SUITE_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn db() -> &'static UnitDb {
    UnitDb::shared()
}

fn cfg() -> CheckerConfig {
    CheckerConfig::default()
}

fn corpus() -> Vec<CorpusEntry> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    load_corpus(&root, db()).expect("golden corpus loads")
}

fn golden(name: &str) -> Statement {
    corpus()
        .into_iter()
        .find(|e| e.name() == name)
        .unwrap_or_else(|| panic!("no golden entry {name}"))
        .statement
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn exact(q: &Quantity) -> Option<BigRational> {
    q.val().as_exact().cloned()
}

/// Runs `auto_prove` and checks the wall-clock budget.
fn timed_prove(s: &Statement) -> Result<(Verdict, Duration), String> {
    let t = Instant::now();
    let v = auto_prove(s, db(), &cfg()).map_err(|e| e.to_string())?;
    Ok((v, t.elapsed()))
}

fn env_of(s: &Statement) -> Result<Env, String> {
    defined_values(s, db(), &cfg()).map_err(|e| e.to_string())
}

fn capacitor() -> Outcome {
    let s = golden("ch13_electro_question_8");
    let (v, took) = timed_prove(&s)?;
    ensure(v.is_proved(), v.render())?;
    let c = env_of(&s)?.scalars.get("C").cloned().ok_or("C not determined")?;
    ensure(exact(&c) == Some(rat(1, 125_000_000_000)), format!("C = {}", c.val().to_decimal_string(40)))?;
    ensure(c.dim == db().lookup_kind("Capacitance").unwrap(), "C is not a capacitance")?;
    ensure(v.proof().unwrap().approx_steps.is_empty(), "decided approximately")?;
    ensure(took < STATEMENT_BUDGET, format!("took {took:?}"))?;
    Ok(format!("C = 1/125000000000 F exactly, proved in {took:?}"))
}

fn ideal_gas() -> Outcome {
    let s = golden("ch10_question_4");
    ensure(cfg().numeric.precision_bits >= MIN_PRECISION_BITS, "precision below 50 digits")?;
    ensure(cfg().numeric.rel_tolerance <= REL_TOLERANCE, "tolerance looser than 1e-30")?;
    let (v, took) = timed_prove(&s)?;
    ensure(v.is_proved(), v.render())?;
    let env = env_of(&s)?;
    let dims = DimEnv::from_statement(&s, db()).map_err(|e| e.to_string())?;
    let sc = Scope::from_statement(&s);
    let ratio = parse_expr("V2 / V1", &sc, db()).map_err(|e| e.to_string())?;
    let q = Evaluator::new(db(), &dims, &cfg().numeric)
        .eval(&ratio, &env)
        .map_err(|e| e.to_string())?;
    ensure(exact(&q) == Some(rat(10_832_250, 144_739)), format!("V2/V1 = {}", q.val().to_decimal_string(40)))?;
    ensure(q.dim.is_dimensionless(), "ratio has a dimension")?;
    ensure(!v.proof().unwrap().approx_steps.is_empty(), "rpow step should be flagged approx-decided")?;
    ensure(took < STATEMENT_BUDGET, format!("took {took:?}"))?;
    Ok(format!("V2/V1 = 10832250/144739 exactly; rpow closed at 192 bits within 1e-30, {took:?}"))
}

fn friction() -> Outcome {
    let s = golden("mechanics_74_university_0");
    let (v, _) = timed_prove(&s)?;
    ensure(v.is_proved(), v.render())?;
    let env = env_of(&s)?;
    let get = |n: &str| env.scalars.get(n).and_then(exact);
    ensure(get("μ_s") == Some(rat(46, 100)), "μ_s ≠ 0.46")?;
    ensure(get("μ_k") == Some(rat(40, 100)), "μ_k ≠ 0.40")?;
    Ok("μ_s = 0.46 and μ_k = 0.40 exactly; proved".into())
}

fn rearrangement() -> Outcome {
    let s = golden("mechanics_73_university");
    let sc = Scope::from_statement(&s);
    let l = parse_expr("m_2 * g / (m_1 + m_2)", &sc, db()).unwrap();
    let r = parse_expr("(m_2 / (m_1 + m_2)) * g", &sc, db()).unwrap();
    let proof = ring_equal(&l, &r, db(), RingOptions::default()).map_err(|e| e.to_string())?;
    ensure(proof.is_some(), "ring_equal rejected the rearrangement")?;
    let (v, _) = timed_prove(&s)?;
    let p = v.proof().ok_or_else(|| v.render())?;
    let numeric = p.trace.steps.iter().filter(|s| s.to_string() == "numeric").count();
    ensure(numeric == 0, "used numeric evaluation")?;
    Ok(format!("ring closes both conjuncts, {} steps, no numeric step", p.trace.steps.len()))
}

fn kinematics() -> Outcome {
    let s = golden("university_mechanics_3");
    let (v, _) = timed_prove(&s)?;
    let p = v.proof().ok_or_else(|| v.render())?;
    ensure(
        p.trace.steps.iter().any(|st| st.to_string().starts_with("poly_match hxxx t")),
        "no coefficient matching in the trace",
    )?;
    // The coefficient equations pin a and v_0: the function equality holds
    // exactly at (6, -2) and fails nearby.
    let dims = DimEnv::from_statement(&s, db()).map_err(|e| e.to_string())?;
    let config = cfg();
    let ev = Evaluator::new(db(), &dims, &config.numeric);
    let holds = |a: i64, v0: i64| -> Result<bool, String> {
        let mut env = Env {
            functions: function_definitions(&s, &dims),
            ..Env::default()
        };
        env.bind("a", Quantity::new(NumericValue::from_integer(a), dims.scalars["a"]));
        env.bind("v_0", Quantity::new(NumericValue::from_integer(v0), dims.scalars["v_0"]));
        let t = ev.eval_prop(&s.hyp("hxxx").unwrap().prop, &env).map_err(|e| e.to_string())?;
        ensure(!t.approx, "approximate")?;
        Ok(t.value)
    };
    ensure(holds(6, -2)?, "xf = xf1 fails at a = 6, v_0 = -2")?;
    ensure(!holds(7, -2)? && !holds(6, -1)?, "xf = xf1 holds off the solution")?;
    Ok("a = 6 m/s² and v_0 = -2 m/s from coefficient matching; proved".into())
}

/// Independent check of each branch with plain rational arithmetic: put
/// v² at the claimed value, recompute f and N from their definitions, and
/// confirm the premise f = ε μ N holds; move v² and confirm it fails.
fn banked_branch_oracle(eps: i64, m: &BigRational, big_r: &BigRational, s: &BigRational, c: &BigRational, mu: &BigRational, g: &BigRational) -> Result<(), String> {
    let e = BigRational::from_integer(eps.into());
    let den = c + &e * mu * s;
    if den.is_zero() {
        return Ok(());
    }
    let r = s * big_r;
    let goal_v2 = (s - &e * mu * c) * g * &r / &den;
    let premise = |v2: &BigRational| {
        let f = m * (s * g - c * v2 / &r);
        let n = m * (c * g + s * v2 / &r);
        f == &e * mu * n
    };
    ensure(premise(&goal_v2), format!("branch ε = {eps}: premise fails at the claimed v²"))?;
    ensure(!premise(&(&goal_v2 + BigRational::from_integer(1.into()))), format!("branch ε = {eps}: premise does not pin v²"))
}

fn epsilon_case() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 200,
        ..Config::default()
    });
    let q = (1i64..50, 1i64..9).prop_map(|(n, d)| rat(n, d));
    let qs = (-40i64..40, 1i64..9).prop_map(|(n, d)| rat(n, d));
    runner
        .run(
            &(q.clone(), q.clone(), qs.clone(), qs, q.clone(), q),
            |(m, big_r, s, c, mu, g)| {
                prop_assume!(!s.is_zero() && !c.is_zero());
                for eps in [1, -1] {
                    banked_branch_oracle(eps, &m, &big_r, &s, &c, &mu, &g).map_err(TestCaseError::fail)?;
                }
                Ok(())
            },
        )
        .map_err(|e| format!("oracle: {e}"))?;
    let s = golden("ch2_q32");
    let (v, _) = timed_prove(&s)?;
    let p = v.proof().ok_or_else(|| v.render())?;
    let text = p.trace.to_string();
    ensure(text.contains("case_split ε {1, -1}"), "no case split")?;
    ensure(text.matches("ring").count() == 2, "expected one ring step per branch")?;
    ensure(p.approx_steps.is_empty(), "approximate step")?;
    Ok(format!(
        "both branches validated by rational oracle (200 cases); proved via case split + ring, assuming {}",
        p.side_conditions.join(", ")
    ))
}

fn dimension_analysis() -> Outcome {
    let entry = corpus().into_iter().find(|e| e.name() == "ch2_q1").unwrap();
    let report = check_dimensions(&entry.statement, db());
    ensure(report.is_homogeneous(), report.render(Some(&entry.text)))?;
    let mutated = entry.text.replace("T(0) = m * g", "T(0) = m");
    ensure(mutated != entry.text, "mutation site not found")?;
    let s = parse_statement(&mutated).map_err(|e| e.to_string())?;
    let r = check_dimensions(&s, db());
    let issues: Vec<_> = r.issues().collect();
    ensure(issues.len() == 1, format!("{} issues", issues.len()))?;
    ensure(issues[0].name == "T_light_def", format!("issue at {}", issues[0].name))?;
    match &issues[0].status {
        DimStatus::Mismatch { expected, found, .. }
            if *expected == db().lookup_kind("Force").unwrap()
                && *found == db().lookup_kind("Mass").unwrap() => {}
        other => return Err(format!("unexpected status: {other}")),
    }
    Ok(format!("{} entries homogeneous; mutation gives one force-vs-mass mismatch at T_light_def", report.entries.len()))
}

fn aggregation() -> Outcome {
    let line = |t: Tally| Line {
        name: String::new(),
        passes: t.passes,
        total: t.total,
        rate: t.to_string(),
        percent: percent_digits(&t.rate()),
    };
    let pool = |parts: [(u64, u64); 3]| {
        let ts: Vec<Tally> = parts.iter().map(|&(p, t)| Tally::new(p, t)).collect();
        let overall = aggregate(&ts);
        (ts.into_iter().map(line).collect::<Vec<_>>(), overall)
    };
    let (levels, a) = pool([(9, 104), (18, 62), (2, 34)]);
    ensure(a == Tally::new(29, 200) && a.rate() == rat(29, 200), format!("pooled {a}"))?;
    let rendered = level_row(&levels, &line(a));
    ensure(rendered == "8.65% | 29.03% | 5.88% | 14.50%", rendered.clone())?;
    let (_, b) = pool([(33, 104), (46, 62), (0, 34)]);
    ensure(b == Tally::new(79, 200) && b.percent() == "39.50%", format!("{b} {}", b.percent()))?;
    Ok(format!("29/200 = 14.50% ({rendered}); 79/200 = 39.50%"))
}

fn property_suites() -> Outcome {
    let cases = |n| Config {
        cases: n,
        failure_persistence: None,
        ..Config::default()
    };
    let run = |name: &str, r: Result<(), String>| r.map_err(|e| format!("{name}: {e}"));

    let mut t = TestRunner::new(cases(1000));
    run(
        "dimension group laws",
        t.run(
            &(support::arb_dimension(), support::arb_dimension(), support::arb_dimension()),
            |(a, b, c)| {
                let ab = a.combine(&b).unwrap();
                prop_assert_eq!(ab, b.combine(&a).unwrap());
                prop_assert_eq!(ab.combine(&c).unwrap(), a.combine(&b.combine(&c).unwrap()).unwrap());
                prop_assert_eq!(a.combine(&physkernel::dimension::Dimension::dimensionless()).unwrap(), a);
                prop_assert!(a.combine(&a.invert()).unwrap().is_dimensionless());
                Ok(())
            },
        )
        .map_err(|e| e.to_string()),
    )?;

    let mut t = TestRunner::new(cases(1000));
    let n = cfg().numeric;
    run(
        "val homomorphism",
        t.run(
            &(
                support::arb_value(),
                support::arb_value(),
                support::arb_value(),
                support::arb_int_dimension(),
                support::arb_int_dimension(),
            ),
            |(a, b, c, da, dbm)| {
                let x = Quantity::new(a.clone(), da);
                let y = Quantity::new(b.clone(), dbm);
                prop_assert!(q_val(&q_mul(&x, &y, &n).unwrap()).identical(&a.mul(&b, &n)));
                let y2 = Quantity::new(b.clone(), da);
                prop_assert!(q_val(&q_add(&x, &y2, &n).unwrap()).identical(&a.add(&b, &n)));
                prop_assert!(q_val(&q_smul(&c, &x, &n)).identical(&c.mul(&a, &n)));
                Ok(())
            },
        )
        .map_err(|e| e.to_string()),
    )?;

    let mut t = TestRunner::new(cases(500));
    run(
        "parser round trip",
        t.run(&support::syntax::statement(), |s| {
            let text = print_statement(&s);
            let back = parse_statement(&text).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(ast_eq(&s, &back));
            Ok(())
        })
        .map_err(|e| e.to_string()),
    )?;

    let mut t = TestRunner::new(cases(500));
    run(
        "ring vs numeric",
        t.run(
            &(
                support::field::field_expr(),
                prop::collection::vec(any::<u8>(), 64),
                support::field::points(),
            ),
            |(seed, choices, pts)| {
                prop_assume!(ring_equal(&seed, &seed, db(), RingOptions::default()).is_ok());
                let other = support::field::rewrite(&seed, &mut choices.into_iter());
                prop_assert!(support::field::ring(&seed, &other));
                prop_assert!(support::field::Oracle::new().agree(&seed, &other, &pts));
                Ok(())
            },
        )
        .map_err(|e| e.to_string()),
    )?;

    let mut proved = 0;
    let mut consistent = 0;
    for e in corpus() {
        if !auto_prove(&e.statement, db(), &cfg()).map_err(|x| x.to_string())?.is_proved() {
            continue;
        }
        proved += 1;
        let r = soundness_fuzz(&e.statement, db(), &cfg(), 100, 11).map_err(|x| x.to_string())?;
        ensure(r.samples >= 100, "fewer than 100 samples")?;
        if let Some(bad) = r.falsified.first() {
            return Err(format!("{} falsified: {bad:?}", e.name()));
        }
        consistent += r.consistent;
    }
    Ok(format!(
        "1000 group-law, 1000 val, 500 round-trip, 500 ring/numeric cases; 100 fuzz samples x {proved} proved entries ({consistent} consistent), none falsified"
    ))
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_physcheck");
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let dir = std::env::temp_dir().join(format!("physcheck-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    for i in 0..2 {
        let path = dir.join(format!("report{i}.json"));
        let st = std::process::Command::new(exe)
            .args(["eval", "--corpus"])
            .arg(&root)
            .arg("--report")
            .arg(&path)
            .stdout(std::process::Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        ensure(st.success(), format!("eval exited with {st}"))?;
        reports.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(reports[0] == reports[1], "reports differ")?;
    let lib = run_eval(&corpus(), &ProverBinding::Builtin, &EvalOptions::default()).map_err(|e| e.to_string())?;
    ensure(lib.report.to_json().as_bytes() == reports[0].as_slice(), "library and CLI reports differ")?;
    Ok(format!("two CLI runs byte-identical ({} bytes)", reports[0].len()))
}

fn main() {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("capacitor evaluates exactly and proves", capacitor),
        ("ideal-gas ratio exact, rpow goal closes", ideal_gas),
        ("friction coefficients exact", friction),
        ("symbolic rearrangement by ring alone", rearrangement),
        ("kinematics coefficient matching", kinematics),
        ("epsilon case split", epsilon_case),
        ("capstan dimensions and mutation", dimension_analysis),
        ("pooled aggregation", aggregation),
        ("property suites", property_suites),
        ("eval determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    let took = start.elapsed();
    let within = took < SUITE_BUDGET;
    println!(
        "acceptance: {}/10 passed in {took:.1?} (budget {SUITE_BUDGET:?}{})",
        10 - failed,
        if within { "" } else { ", EXCEEDED" }
    );
    if failed > 0 || !within {
        std::process::exit(1);
    }
}
