//! The pass@k loop. Every verdict comes from the checker; prover output is
//! only ever a candidate script.
//!
//! External provers speak one JSON object per line. Each attempt runs in a
//! fresh child process, which receives one request on stdin
//!
//! ```text
//! {"id":"<entry>#<attempt>","statement":"<.phys text>","attempt":<k-index>}
//! ```
//!
//! and must print one response on stdout:
//!
//! ```text
//! {"id":"<entry>#<attempt>","script":"<derivation script>"}
//! ```

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use physkernel::checker::{auto_prove, check_derivation, CheckerConfig, DerivationScript, Verdict};
use physkernel::corpus::CorpusEntry;
use physkernel::unitdb::UnitDb;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{ConfigEcho, EvalReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProverBinding {
    Builtin,
    External {
        /// Program followed by its arguments.
        command: Vec<String>,
        timeout: Duration,
        k: u32,
    },
}

impl ProverBinding {
    pub fn k(&self) -> u32 {
        match self {
            ProverBinding::Builtin => 1,
            ProverBinding::External { k, .. } => *k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("timeout must be positive")]
    ZeroTimeout,
    #[error("empty prover command")]
    EmptyCommand,
}

/// Outcome of one attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttemptVerdict {
    Proved,
    Refuted,
    Unknown,
    /// The script did not parse or named something that does not exist.
    Malformed,
    /// The prover crashed or answered out of protocol.
    Crashed,
    Timeout,
}

impl AttemptVerdict {
    fn of(v: &Verdict) -> AttemptVerdict {
        match v {
            Verdict::Proved(_) => AttemptVerdict::Proved,
            Verdict::Refuted(_) => AttemptVerdict::Refuted,
            Verdict::Unknown(_) => AttemptVerdict::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AttemptVerdict::Proved => "proved",
            AttemptVerdict::Refuted => "refuted",
            AttemptVerdict::Unknown => "unknown",
            AttemptVerdict::Malformed => "malformed",
            AttemptVerdict::Crashed => "crashed",
            AttemptVerdict::Timeout => "timeout",
        }
    }
}

impl std::fmt::Display for AttemptVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.as_str())
    }
}

/// Field order here is the attempt-log format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub entry: String,
    pub attempt: u32,
    pub verdict: AttemptVerdict,
    /// The candidate script, or the builtin prover's trace.
    pub script: String,
    pub detail: String,
    pub wall_ms: u64,
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub db: UnitDb,
    pub checker: CheckerConfig,
    /// Worker threads; `0` lets the pool decide.
    pub workers: usize,
    /// Echoed into the report.
    pub constants: BTreeMap<String, String>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            db: UnitDb::shared().clone(),
            checker: CheckerConfig::default(),
            workers: 0,
            constants: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub report: EvalReport,
    /// Sorted by entry, then attempt.
    pub records: Vec<AttemptRecord>,
}

impl EvalOutcome {
    /// One JSON record per line.
    pub fn log_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize)]
struct Request<'a> {
    id: &'a str,
    statement: &'a str,
    attempt: u32,
}

#[derive(Deserialize)]
struct Response {
    id: String,
    script: String,
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn builtin_attempt(e: &CorpusEntry, opts: &EvalOptions) -> AttemptRecord {
    let start = Instant::now();
    let (verdict, script, detail) = match auto_prove(&e.statement, &opts.db, &opts.checker) {
        Ok(v) => {
            let script = match &v {
                Verdict::Proved(p) => p.trace.to_string(),
                Verdict::Unknown(r) => r.trace.to_string(),
                Verdict::Refuted(_) => String::new(),
            };
            let detail = match &v {
                Verdict::Proved(_) => String::new(),
                _ => v.render().lines().next().unwrap_or("").to_string(),
            };
            (AttemptVerdict::of(&v), script, detail)
        }
        Err(err) => (AttemptVerdict::Malformed, String::new(), err.to_string()),
    };
    AttemptRecord {
        entry: e.name().to_string(),
        attempt: 0,
        verdict,
        script,
        detail,
        wall_ms: elapsed_ms(start),
    }
}

/// Runs the prover once and returns its script, or the failure verdict.
fn ask_prover(
    command: &[String],
    timeout: Duration,
    id: &str,
    statement: &str,
    attempt: u32,
) -> Result<String, (AttemptVerdict, String)> {
    let crashed = |m: String| (AttemptVerdict::Crashed, m);
    let mut child = Command::new(&command[0])
        .args(&command[1..])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| crashed(format!("spawn failed: {e}")))?;
    let mut line = serde_json::to_string(&Request {
        id,
        statement,
        attempt,
    })
    .expect("request serializes");
    line.push('\n');
    let mut stdin = child.stdin.take().expect("piped stdin");
    // A prover that exits without reading its request is a crash, which
    // shows up below as a missing response.
    let _ = stdin.write_all(line.as_bytes());
    drop(stdin);

    let stdout = child.stdout.take().expect("piped stdout");
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let mut first = String::new();
        let r = BufReader::new(stdout).read_line(&mut first).map(|_| first);
        let _ = tx.send(r);
    });
    let reply = rx.recv_timeout(timeout);
    let _ = child.kill();
    let status = child.wait();
    match reply {
        Err(_) => Err((AttemptVerdict::Timeout, format!("no response within {timeout:?}"))),
        Ok(Err(e)) => Err(crashed(format!("reading response: {e}"))),
        Ok(Ok(text)) if text.trim().is_empty() => Err(crashed(match status {
            Ok(s) => format!("no response, prover exited with {s}"),
            Err(e) => format!("no response: {e}"),
        })),
        Ok(Ok(text)) => {
            let resp: Response = serde_json::from_str(text.trim())
                .map_err(|e| crashed(format!("bad response: {e}")))?;
            if resp.id != id {
                return Err(crashed(format!("response id `{}` does not match `{id}`", resp.id)));
            }
            Ok(resp.script)
        }
    }
}

fn external_attempt(
    e: &CorpusEntry,
    attempt: u32,
    command: &[String],
    timeout: Duration,
    opts: &EvalOptions,
) -> AttemptRecord {
    let start = Instant::now();
    let id = format!("{}#{attempt}", e.name());
    let (verdict, script, detail) = match ask_prover(command, timeout, &id, &e.text, attempt) {
        Err((v, d)) => (v, String::new(), d),
        Ok(script) => match script.parse::<DerivationScript>() {
            Err(err) => (AttemptVerdict::Malformed, script, err.to_string()),
            Ok(parsed) => match check_derivation(&e.statement, &parsed, &opts.db, &opts.checker) {
                Ok(v) => {
                    let detail = match &v {
                        Verdict::Proved(_) => String::new(),
                        _ => v.render().lines().next().unwrap_or("").to_string(),
                    };
                    (AttemptVerdict::of(&v), script, detail)
                }
                Err(err) => (AttemptVerdict::Malformed, script, err.to_string()),
            },
        },
    };
    AttemptRecord {
        entry: e.name().to_string(),
        attempt,
        verdict,
        script,
        detail,
        wall_ms: elapsed_ms(start),
    }
}

fn validate(b: &ProverBinding) -> Result<(), HarnessError> {
    if let ProverBinding::External {
        command,
        timeout,
        k,
    } = b
    {
        if *k == 0 {
            return Err(HarnessError::ZeroK);
        }
        if timeout.is_zero() {
            return Err(HarnessError::ZeroTimeout);
        }
        if command.is_empty() {
            return Err(HarnessError::EmptyCommand);
        }
    }
    Ok(())
}

/// Entries that pass within the first `k` attempts of `records`. Only
/// `Proved` attempts count.
pub fn passed_within(records: &[AttemptRecord], k: u32) -> BTreeMap<String, bool> {
    let mut out: BTreeMap<String, bool> = BTreeMap::new();
    for r in records {
        let ok = r.attempt < k && r.verdict == AttemptVerdict::Proved;
        *out.entry(r.entry.clone()).or_default() |= ok;
    }
    out
}

/// Evaluates every entry with up to `k` attempts each. Entries run on a
/// bounded worker pool; results are sorted before they are returned.
pub fn run_eval(
    corpus: &[CorpusEntry],
    binding: &ProverBinding,
    opts: &EvalOptions,
) -> Result<EvalOutcome, HarnessError> {
    validate(binding)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .expect("thread pool");
    let mut records: Vec<AttemptRecord> = pool.install(|| {
        corpus
            .par_iter()
            .flat_map_iter(|e| match binding {
                ProverBinding::Builtin => vec![builtin_attempt(e, opts)],
                ProverBinding::External {
                    command,
                    timeout,
                    k,
                } => (0..*k)
                    .map(|i| external_attempt(e, i, command, *timeout, opts))
                    .collect(),
            })
            .collect()
    });
    records.sort_by(|a, b| (&a.entry, a.attempt).cmp(&(&b.entry, b.attempt)));

    let passed = passed_within(&records, binding.k());
    let config = ConfigEcho {
        prover: match binding {
            ProverBinding::Builtin => "builtin".into(),
            ProverBinding::External { command, .. } => command.join(" "),
        },
        k: binding.k(),
        timeout_secs: match binding {
            ProverBinding::Builtin => None,
            ProverBinding::External { timeout, .. } => Some(timeout.as_secs()),
        },
        constants: opts.constants.clone(),
        precision_bits: opts.checker.numeric.precision_bits,
        rel_tolerance: format!("{:e}", opts.checker.numeric.rel_tolerance),
    };
    let report = EvalReport::from_outcomes(
        config,
        corpus.iter().map(|e| {
            (
                e.statement.meta.level,
                e.statement.meta.topic,
                passed.get(e.name()).copied().unwrap_or(false),
            )
        }),
    );
    let outcome = EvalOutcome { report, records };
    audit(&outcome);
    Ok(outcome)
}

/// Panics if the report counts a pass that no `Proved` record supports, or
/// if the overall is not the sum of the levels.
pub fn audit(o: &EvalOutcome) {
    let proved: u64 = passed_within(&o.records, o.report.config.k)
        .values()
        .filter(|v| **v)
        .count() as u64;
    assert_eq!(proved, o.report.overall.passes, "passes without a proved attempt");
    let level_sum: u64 = o.report.levels.iter().map(|l| l.passes).sum();
    assert_eq!(level_sum, o.report.overall.passes, "overall is not pooled");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(entry: &str, attempt: u32, v: AttemptVerdict) -> AttemptRecord {
        AttemptRecord {
            entry: entry.into(),
            attempt,
            verdict: v,
            script: String::new(),
            detail: String::new(),
            wall_ms: 0,
        }
    }

    #[test]
    fn pass_at_k_is_monotone() {
        use AttemptVerdict::*;
        let rs = vec![
            rec("a", 0, Unknown),
            rec("a", 1, Proved),
            rec("b", 0, Timeout),
            rec("b", 1, Refuted),
            rec("b", 2, Proved),
            rec("c", 0, Crashed),
        ];
        let count = |k| passed_within(&rs, k).values().filter(|v| **v).count();
        assert_eq!([count(1), count(2), count(3)], [0, 1, 2]);
    }

    #[test]
    fn bad_bindings_rejected() {
        let b = ProverBinding::External {
            command: vec!["x".into()],
            timeout: Duration::from_secs(1),
            k: 0,
        };
        assert_eq!(run_eval(&[], &b, &EvalOptions::default()).unwrap_err(), HarnessError::ZeroK);
        let b = ProverBinding::External {
            command: vec![],
            timeout: Duration::from_secs(1),
            k: 1,
        };
        assert_eq!(
            run_eval(&[], &b, &EvalOptions::default()).unwrap_err(),
            HarnessError::EmptyCommand
        );
    }
}
