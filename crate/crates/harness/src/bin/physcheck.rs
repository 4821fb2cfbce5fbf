//! `physcheck`: dimension checks, proofs, script verification and corpus
//! evaluation from the command line.
//!
//! Exit codes: 0 proved (or homogeneous), 1 unknown (or a dimension issue),
//! 2 refuted, 3 input error.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use physkernel::checker::{
    auto_prove, check_derivation, check_dimensions, CheckerConfig, DerivationScript, DimStatus,
    Verdict,
};
use physkernel::corpus::load_corpus;
use physkernel::lang::{parse_statement_with, Statement};
use physkernel::numeric::NumericValue;
use physkernel::unitdb::UnitDb;
use physkernel_harness::{render_report, run_eval, EvalOptions, ProverBinding};
use serde_json::json;

#[derive(Parser)]
#[command(name = "physcheck", version, about = "Check, prove and evaluate .phys statements")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Constants {
    /// Override a physical constant, e.g. `--constant g=9.8`. Repeatable.
    #[arg(long = "constant", value_name = "NAME=VALUE")]
    constants: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension report for every hypothesis and the goal.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        constants: Constants,
    },
    /// Run the auto-prover.
    Prove {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        constants: Constants,
    },
    /// Check a derivation script against a statement.
    VerifyScript {
        file: PathBuf,
        script: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        constants: Constants,
    },
    /// Pass@k over a corpus directory.
    Eval {
        #[arg(long)]
        corpus: PathBuf,
        /// External prover command; the built-in prover when absent.
        #[arg(long, num_args = 1.., allow_hyphen_values = true, value_name = "CMD")]
        prover: Option<Vec<String>>,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Seconds per external attempt.
        #[arg(long, default_value_t = 60)]
        timeout: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Machine-readable report.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Attempt log, one JSON record per line.
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        constants: Constants,
    },
    /// Answer prover requests on stdin with the built-in prover's traces.
    Serve,
    /// List units, prefixes, constants and kinds.
    Units,
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn overrides(c: &Constants) -> Result<(UnitDb, BTreeMap<String, String>), InputError> {
    let mut pairs: Vec<(String, BigRational)> = Vec::new();
    let mut echo = BTreeMap::new();
    for s in &c.constants {
        let (name, value) = s
            .split_once('=')
            .ok_or_else(|| InputError(format!("`{s}`: expected NAME=VALUE")))?;
        let v = NumericValue::parse_decimal(value.trim())
            .ok()
            .and_then(|v| v.as_exact().cloned())
            .ok_or_else(|| InputError(format!("`{value}` is not a decimal")))?;
        pairs.push((name.trim().to_string(), v));
        echo.insert(name.trim().to_string(), value.trim().to_string());
    }
    Ok((UnitDb::shared().with_constant_overrides(&pairs)?, echo))
}

fn read_statement(path: &Path, db: &UnitDb) -> Result<(String, Statement), InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let s = parse_statement_with(&text, db)
        .map_err(|e| InputError(format!("{}:{e}", path.display())))?;
    Ok((text, s))
}

fn verdict_code(v: &Verdict) -> u8 {
    match v {
        Verdict::Proved(_) => 0,
        Verdict::Unknown(_) => 1,
        Verdict::Refuted(_) => 2,
    }
}

fn verdict_json(v: &Verdict) -> serde_json::Value {
    match v {
        Verdict::Proved(p) => json!({
            "verdict": "proved",
            "trace": p.trace.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "approx_steps": p.approx_steps,
            "side_conditions": p.side_conditions,
        }),
        Verdict::Refuted(c) => json!({
            "verdict": "refuted",
            "step": c.step,
            "goal": c.goal,
            "env": c.env.iter().map(|(k, v)| json!({"name": k, "value": v})).collect::<Vec<_>>(),
        }),
        Verdict::Unknown(r) => json!({
            "verdict": "unknown",
            "goal": r.goal,
            "locals": r.locals,
            "failed_step": r.failed_step,
            "reason": r.reason,
            "trace": r.trace.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        }),
    }
}

fn print_verdict(v: &Verdict, as_json: bool) {
    if as_json {
        println!("{}", verdict_json(v));
    } else {
        print!("{}", v.render());
    }
}

fn run(cli: Cli) -> Result<u8, InputError> {
    let cfg = CheckerConfig::default();
    match cli.cmd {
        Cmd::Check {
            file,
            json,
            constants,
        } => {
            let (db, _) = overrides(&constants)?;
            let (text, s) = read_statement(&file, &db)?;
            let report = check_dimensions(&s, &db);
            if json {
                for e in &report.entries {
                    let mut rec = json!({"name": e.name, "status": "homogeneous"});
                    if let Some(span) = e.status.span() {
                        let (line, column) = span.line_col(&text);
                        rec["line"] = json!(line);
                        rec["column"] = json!(column);
                    }
                    match &e.status {
                        DimStatus::Homogeneous => {}
                        DimStatus::Mismatch {
                            expected, found, ..
                        } => {
                            rec["status"] = json!("mismatch");
                            rec["expected"] = json!(expected.to_string());
                            rec["found"] = json!(found.to_string());
                        }
                        DimStatus::Unresolved { .. } => rec["status"] = json!("unresolved"),
                        DimStatus::Invalid { message, .. } => {
                            rec["status"] = json!("invalid");
                            rec["message"] = json!(message);
                        }
                    }
                    println!("{rec}");
                }
            } else {
                print!("{}", report.render(Some(&text)));
            }
            Ok(if report.is_homogeneous() { 0 } else { 1 })
        }
        Cmd::Prove {
            file,
            json,
            constants,
        } => {
            let (db, _) = overrides(&constants)?;
            let (_, s) = read_statement(&file, &db)?;
            let v = auto_prove(&s, &db, &cfg)?;
            print_verdict(&v, json);
            Ok(verdict_code(&v))
        }
        Cmd::VerifyScript {
            file,
            script,
            json,
            constants,
        } => {
            let (db, _) = overrides(&constants)?;
            let (_, s) = read_statement(&file, &db)?;
            let text = std::fs::read_to_string(&script)
                .map_err(|e| InputError(format!("{}: {e}", script.display())))?;
            let parsed: DerivationScript = text
                .parse()
                .map_err(|e| InputError(format!("{}:{e}", script.display())))?;
            let v = check_derivation(&s, &parsed, &db, &cfg)?;
            print_verdict(&v, json);
            Ok(verdict_code(&v))
        }
        Cmd::Eval {
            corpus,
            prover,
            k,
            timeout,
            workers,
            report,
            log,
            constants,
        } => {
            let (db, echo) = overrides(&constants)?;
            let entries = load_corpus(&corpus, &db)?;
            let binding = match prover {
                None => ProverBinding::Builtin,
                Some(command) => ProverBinding::External {
                    command,
                    timeout: Duration::from_secs(timeout),
                    k,
                },
            };
            let opts = EvalOptions {
                db,
                checker: cfg,
                workers,
                constants: echo,
            };
            let out = run_eval(&entries, &binding, &opts)?;
            print!("{}", render_report(&out.report));
            if let Some(p) = report {
                std::fs::write(&p, out.report.to_json())
                    .map_err(|e| InputError(format!("{}: {e}", p.display())))?;
            }
            if let Some(p) = log {
                std::fs::write(&p, out.log_jsonl())
                    .map_err(|e| InputError(format!("{}: {e}", p.display())))?;
            }
            Ok(0)
        }
        Cmd::Serve => {
            let stdin = io::stdin();
            let mut stdout = io::stdout();
            for line in stdin.lock().lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let req: serde_json::Value = serde_json::from_str(&line)?;
                let id = req["id"].as_str().unwrap_or("").to_string();
                let statement = req["statement"].as_str().unwrap_or("");
                let script = match parse_statement_with(statement, UnitDb::shared()) {
                    Ok(s) => match auto_prove(&s, UnitDb::shared(), &cfg) {
                        Ok(Verdict::Proved(p)) => p.trace.to_string(),
                        _ => String::new(),
                    },
                    Err(_) => String::new(),
                };
                writeln!(stdout, "{}", json!({"id": id, "script": script}))?;
                stdout.flush()?;
            }
            Ok(0)
        }
        Cmd::Units => {
            print!("{}", UnitDb::shared().unit_table());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    // Usage errors share the input-error code; clap's own would collide
    // with "refuted".
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
