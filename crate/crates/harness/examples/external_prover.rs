//! Drives an external prover over the line-delimited JSON protocol.
//!
//! Each attempt starts the command afresh, writes one request line
//! `{"id", "statement", "attempt"}` and reads one reply `{"id", "script"}`.
//! The script is then checked; the prover's own claims count for nothing.
//!
//! `cargo run -p physkernel-harness --example external_prover`

use std::time::Duration;

use physkernel::corpus::load_corpus;
use physkernel::unitdb::UnitDb;
use physkernel_harness::{passed_within, run_eval, EvalOptions, ProverBinding};

fn main() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus");
    let corpus = load_corpus(root.as_ref(), UnitDb::shared()).unwrap();

    // A toy prover in shell: always answers `ring`. It will not get far.
    let naive = ProverBinding::External {
        command: vec![
            "sh".into(),
            "-c".into(),
            r#"read line; id=$(printf '%s' "$line" | sed 's/^{"id":"\([^"]*\)".*/\1/'); printf '{"id":"%s","script":"ring"}\n' "$id""#.into(),
        ],
        timeout: Duration::from_secs(10),
        k: 2,
    };
    let out = run_eval(&corpus, &naive, &EvalOptions::default()).unwrap();
    println!("`ring` prover, pass@2: {}", out.report.overall.rate);
    print!("{}", out.log_jsonl().lines().take(3).map(|l| format!("{l}\n")).collect::<String>());

    // The bundled `physcheck serve` answers with the built-in prover's traces.
    let exe = std::env::var("PHYSCHECK").unwrap_or_else(|_| concat!(env!("CARGO_MANIFEST_DIR"), "/../../target/debug/physcheck").into());
    if std::path::Path::new(&exe).exists() {
        let served = ProverBinding::External {
            command: vec![exe, "serve".into()],
            timeout: Duration::from_secs(30),
            k: 1,
        };
        let out = run_eval(&corpus, &served, &EvalOptions::default()).unwrap();
        let passed = passed_within(&out.records, 1);
        println!("\n`physcheck serve`, pass@1: {}", out.report.overall.rate);
        for (name, ok) in passed {
            println!("  {name:<28} {}", if ok { "verified" } else { "-" });
        }
    } else {
        println!("\n(build the `physcheck` binary to also run it as a prover)");
    }
}
