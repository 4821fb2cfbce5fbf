use std::path::PathBuf;
use std::time::Duration;

use physkernel::corpus::{load_corpus, CorpusEntry, Tier};
use physkernel::unitdb::UnitDb;
use physkernel_harness::{
    audit, passed_within, render_report, run_eval, AttemptVerdict, EvalOptions, ProverBinding,
};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus() -> Vec<CorpusEntry> {
    load_corpus(&root(), UnitDb::shared()).unwrap()
}

fn shell(script: &str, k: u32, timeout_ms: u64) -> ProverBinding {
    ProverBinding::External {
        command: vec!["sh".into(), "-c".into(), script.into()],
        timeout: Duration::from_millis(timeout_ms),
        k,
    }
}

/// Echoes the request id back with a fixed script.
fn answering(script: &str) -> String {
    format!(
        r#"read line; id=$(printf '%s' "$line" | sed 's/^{{"id":"\([^"]*\)".*/\1/'); printf '{{"id":"%s","script":"{script}"}}\n' "$id""#
    )
}

#[test]
fn builtin_passes_exactly_the_auto_tier() {
    let c = corpus();
    let out = run_eval(&c, &ProverBinding::Builtin, &EvalOptions::default()).unwrap();
    let passed = passed_within(&out.records, 1);
    for e in &c {
        assert_eq!(passed[e.name()], e.expected == Tier::ProvableByAuto, "{}", e.name());
    }
    assert_eq!(out.report.overall.passes, 6);
    assert_eq!(out.records.len(), c.len());
}

#[test]
fn builtin_report_matches_snapshot() {
    let out = run_eval(&corpus(), &ProverBinding::Builtin, &EvalOptions::default()).unwrap();
    let snap = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots");
    assert_eq!(
        out.report.to_json(),
        std::fs::read_to_string(snap.join("golden_report.json")).unwrap()
    );
    assert_eq!(
        render_report(&out.report),
        std::fs::read_to_string(snap.join("golden_report.txt")).unwrap()
    );
}

#[test]
fn builtin_runs_are_byte_identical() {
    let opts = EvalOptions {
        workers: 4,
        ..EvalOptions::default()
    };
    let a = run_eval(&corpus(), &ProverBinding::Builtin, &opts).unwrap();
    let b = run_eval(&corpus(), &ProverBinding::Builtin, &EvalOptions::default()).unwrap();
    assert_eq!(a.report.to_json(), b.report.to_json());
    let strip = |o: &physkernel_harness::EvalOutcome| {
        o.records
            .iter()
            .map(|r| (r.entry.clone(), r.attempt, r.verdict, r.script.clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn empty_scripts_pass_nothing() {
    let out = run_eval(&corpus(), &shell(&answering(""), 2, 5000), &EvalOptions::default()).unwrap();
    assert_eq!(out.report.overall.passes, 0);
    assert_eq!(out.records.len(), 16);
    assert!(out
        .records
        .iter()
        .all(|r| matches!(r.verdict, AttemptVerdict::Unknown | AttemptVerdict::Refuted)));
}

#[test]
fn replayed_traces_match_builtin() {
    let c = corpus();
    let served = ProverBinding::External {
        command: vec![env!("CARGO_BIN_EXE_physcheck").into(), "serve".into()],
        timeout: Duration::from_secs(30),
        k: 1,
    };
    let ext = run_eval(&c, &served, &EvalOptions::default()).unwrap();
    let builtin = run_eval(&c, &ProverBinding::Builtin, &EvalOptions::default()).unwrap();
    assert_eq!(
        passed_within(&ext.records, 1),
        passed_within(&builtin.records, 1)
    );
    assert_eq!(ext.report.levels, builtin.report.levels);
}

#[test]
fn crashes_and_timeouts_are_failed_attempts() {
    let c: Vec<_> = corpus().into_iter().take(2).collect();
    let crash = run_eval(&c, &shell("exit 3", 1, 5000), &EvalOptions::default()).unwrap();
    assert!(crash.records.iter().all(|r| r.verdict == AttemptVerdict::Crashed));
    let slow = run_eval(&c, &shell("sleep 5", 1, 200), &EvalOptions::default()).unwrap();
    assert!(slow.records.iter().all(|r| r.verdict == AttemptVerdict::Timeout));
    assert_eq!(slow.report.overall.passes, 0);
    let garbage = run_eval(&c, &shell("read l; echo not-json", 1, 5000), &EvalOptions::default()).unwrap();
    assert!(garbage.records.iter().all(|r| r.verdict == AttemptVerdict::Crashed));
}

#[test]
fn wrong_script_is_not_trusted() {
    // Claims success with a step that closes nothing.
    let out = run_eval(&corpus(), &shell(&answering("ring"), 1, 5000), &EvalOptions::default()).unwrap();
    audit(&out);
    for r in &out.records {
        if r.verdict == AttemptVerdict::Proved {
            assert_eq!(r.script, "ring");
        }
    }
    let proved: Vec<_> = out
        .records
        .iter()
        .filter(|r| r.verdict == AttemptVerdict::Proved)
        .map(|r| r.entry.as_str())
        .collect();
    assert!(proved.is_empty(), "{proved:?}");
}

#[test]
fn pass_at_k_grows_with_k() {
    // Attempt 0 answers nonsense, attempt 1 replays a real proof.
    let c: Vec<_> = corpus()
        .into_iter()
        .filter(|e| e.name() == "mechanics_73_university")
        .collect();
    let script = r#"read line; id=$(printf '%s' "$line" | sed 's/^{"id":"\([^"]*\)".*/\1/'); case "$id" in *#0) s="split";; *) s="subst hT\nsubst ha\nsplit\nring\nring";; esac; printf '{"id":"%s","script":"%s"}\n' "$id" "$s""#;
    let out = run_eval(&c, &shell(script, 2, 5000), &EvalOptions::default()).unwrap();
    assert_eq!(out.records[0].verdict, AttemptVerdict::Unknown);
    assert_eq!(out.records[1].verdict, AttemptVerdict::Proved, "{}", out.records[1].detail);
    let count = |k| passed_within(&out.records, k).values().filter(|v| **v).count();
    assert_eq!((count(1), count(2)), (0, 1));
    assert_eq!(out.report.overall.passes, 1);
}
