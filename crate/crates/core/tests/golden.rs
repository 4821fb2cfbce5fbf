use std::path::PathBuf;

use proptest::prelude::*;

use physkernel::checker::{
    auto_prove, check_derivation, check_dimensions, soundness_fuzz, CheckerConfig,
    DerivationScript, DimStatus, Verdict,
};
use physkernel::corpus::{corpus_stats, load_corpus, CorpusEntry, ExpectedVerdict, Tier};
use physkernel::lang::{ast_eq, parse_statement, print_statement, Expr, ExprKind, KindExpr, Level};
use physkernel::unitdb::{Topic, UnitDb};

fn corpus() -> Vec<CorpusEntry> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    load_corpus(&root, UnitDb::shared()).unwrap_or_else(|e| panic!("{e}"))
}

fn entry(name: &str) -> CorpusEntry {
    corpus().into_iter().find(|e| e.name() == name).unwrap()
}

fn cfg() -> CheckerConfig {
    CheckerConfig::default()
}

#[test]
fn loads_with_manifest_counts() {
    let c = corpus();
    assert_eq!(c.len(), 8);
    let s = corpus_stats(c.iter().map(|e| &e.statement));
    assert_eq!(s.total, 8);
    assert_eq!(s.level(Level::College), 4);
    assert_eq!(s.level(Level::CompEasy), 2);
    assert_eq!(s.level(Level::CompHard), 2);
    assert_eq!(s.topic(Topic::Mechanics), 5);
    assert_eq!(s.topic(Topic::Electromagnetism), 2);
    assert_eq!(s.topic(Topic::Thermodynamics), 1);
    let auto = c.iter().filter(|e| e.expected == Tier::ProvableByAuto).count();
    assert_eq!(auto, 6);
}

#[test]
fn every_entry_is_homogeneous() {
    for e in corpus() {
        let r = check_dimensions(&e.statement, UnitDb::shared());
        assert!(r.is_homogeneous(), "{}\n{}", e.name(), r.render(None));
        assert_eq!(r.entries.len(), e.statement.all_hypotheses().len() + 1);
    }
}

#[test]
fn verdicts_match_manifest_and_replay() {
    for e in corpus() {
        let v = auto_prove(&e.statement, UnitDb::shared(), &cfg()).unwrap();
        let want = match e.expected {
            Tier::ProvableByAuto => ExpectedVerdict::Proved,
            _ => e.verdict.unwrap(),
        };
        assert_eq!(v.label(), want.as_str(), "{}\n{}", e.name(), v.render());
        assert_eq!(Some(want), e.verdict);
        if let Verdict::Proved(p) = &v {
            let text = p.trace.to_string();
            let script: DerivationScript = text.parse().unwrap();
            let replay = check_derivation(&e.statement, &script, UnitDb::shared(), &cfg()).unwrap();
            assert!(replay.is_proved(), "{}: {}", e.name(), replay.render());
            let again = auto_prove(&e.statement, UnitDb::shared(), &cfg()).unwrap();
            assert_eq!(v, again);
        }
    }
}

#[test]
fn printed_corpus_reparses() {
    for e in corpus() {
        let back = parse_statement(&print_statement(&e.statement)).unwrap();
        assert!(ast_eq(&back, &e.statement), "{}", e.name());
    }
}

#[test]
fn proved_entries_survive_fuzzing() {
    for e in corpus() {
        let v = auto_prove(&e.statement, UnitDb::shared(), &cfg()).unwrap();
        if !v.is_proved() {
            continue;
        }
        let r = soundness_fuzz(&e.statement, UnitDb::shared(), &cfg(), 100, 7).unwrap();
        assert_eq!(r.samples, 100);
        assert!(r.falsified.is_empty(), "{}: {:?}", e.name(), r.falsified);
    }
}

#[test]
fn side_conditions_of_the_banked_curve() {
    let v = auto_prove(&entry("ch2_q32").statement, UnitDb::shared(), &cfg()).unwrap();
    let p = v.proof().unwrap();
    assert!(p.trace.to_string().contains("case_split ε {1, -1}"));
    assert!(p.side_conditions.iter().any(|c| c == "val(m) ≠ 0"));
    assert!(p.approx_steps.is_empty());
}

#[test]
fn capstan_script_stops_at_the_log_identity() {
    let e = entry("ch2_q1");
    let script: DerivationScript = e.script.as_deref().unwrap().parse().unwrap();
    let ring_at = script.steps.len() - 1;
    match check_derivation(&e.statement, &script, UnitDb::shared(), &cfg()).unwrap() {
        Verdict::Unknown(r) => {
            assert_eq!(r.failed_step, Some(ring_at), "{}", r.reason);
            assert!(r.goal.contains("log"));
        }
        v => panic!("{}", v.render()),
    }
}

#[test]
fn capstan_mutation_is_one_mismatch() {
    let e = entry("ch2_q1");
    let text = std::fs::read_to_string(&e.path).unwrap();
    let mutated = text.replace("T(0) = m * g", "T(0) = m");
    let s = parse_statement(&mutated).unwrap();
    let r = check_dimensions(&s, UnitDb::shared());
    let bad: Vec<_> = r.issues().collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0].name, "T_light_def");
    match &bad[0].status {
        DimStatus::Mismatch { expected, found, .. } => {
            let db = UnitDb::shared();
            assert_eq!(*expected, db.lookup_kind("Force").unwrap());
            assert_eq!(*found, db.lookup_kind("Mass").unwrap());
        }
        other => panic!("{other}"),
    }
}

/// Wraps every declared-variable occurrence in a cast to its own kind.
fn cast_vars(e: &mut Expr, kinds: &[(String, KindExpr)], pick: &mut impl Iterator<Item = bool>) {
    if let ExprKind::Var(v) = &e.kind {
        if let Some((_, k)) = kinds.iter().find(|(n, _)| n == v) {
            if pick.next().unwrap_or(false) {
                let inner = e.clone();
                *e = Expr::synth(ExprKind::Cast(Box::new(inner), k.clone()));
            }
        }
        return;
    }
    for c in e.children_mut() {
        cast_vars(c, kinds, pick);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reports_stable_under_valid_casts(idx in 0usize..9, picks in prop::collection::vec(any::<bool>(), 256)) {
        let mut stmts: Vec<_> = corpus().into_iter().map(|e| e.statement).collect();
        let capstan = std::fs::read_to_string(&entry("ch2_q1").path).unwrap();
        stmts.push(parse_statement(&capstan.replace("T(0) = m * g", "T(0) = m")).unwrap());
        let original = &stmts[idx];
        let kinds: Vec<(String, KindExpr)> = original
            .decls
            .iter()
            .filter_map(|d| match &d.kind {
                physkernel::lang::DeclKind::Scalar(k) => Some((d.name.clone(), k.clone())),
                _ => None,
            })
            .collect();
        let mut s = original.clone();
        let mut pick = picks.into_iter().cycle();
        for h in &mut s.hyps {
            for x in h.prop.exprs_mut() {
                cast_vars(x, &kinds, &mut pick);
            }
        }
        for x in s.goal.exprs_mut() {
            cast_vars(x, &kinds, &mut pick);
        }
        let before = check_dimensions(original, UnitDb::shared());
        let after = check_dimensions(&s, UnitDb::shared());
        let labels = |r: &physkernel::checker::DimReport| {
            r.entries.iter().map(|x| (x.name.clone(), x.status.to_string())).collect::<Vec<_>>()
        };
        prop_assert_eq!(labels(&before), labels(&after));
    }
}
