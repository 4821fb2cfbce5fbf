//! Pass@k evaluation of provers against a physkernel corpus.
//!
//! An entry passes when any of its first `k` candidate scripts is verified
//! by the checker. This is the plain "any of k" count, not an unbiased
//! estimator, and identical candidates are counted as submitted.

pub mod delta;
pub mod eval;
pub mod rates;
pub mod report;

pub use delta::{improvement_delta, DeltaError, DeltaReport, ModelScore, ResultTable, TableRow};
pub use eval::{
    audit, passed_within, run_eval, AttemptRecord, AttemptVerdict, EvalOptions, EvalOutcome,
    HarnessError, ProverBinding,
};
pub use rates::{aggregate, Tally};
pub use report::{level_row, render_report, ConfigEcho, EvalReport, Line};
