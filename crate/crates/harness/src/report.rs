//! Evaluation reports: per-level and per-topic tallies, the pooled overall,
//! and the configuration that produced them.

use std::collections::BTreeMap;

use physkernel::lang::Level;
use physkernel::unitdb::Topic;
use serde::Serialize;

use crate::rates::{aggregate, percent_digits, Tally};

/// One row of a report, in its machine-readable form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Line {
    pub name: String,
    pub passes: u64,
    pub total: u64,
    /// Exact, as `passes/total`.
    pub rate: String,
    /// Percentage rounded to two decimals.
    pub percent: String,
}

impl Line {
    fn new(name: &str, t: Tally) -> Line {
        Line {
            name: name.to_string(),
            passes: t.passes,
            total: t.total,
            rate: t.to_string(),
            percent: percent_digits(&t.rate()),
        }
    }

    pub fn tally(&self) -> Tally {
        Tally::new(self.passes, self.total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub prover: String,
    pub k: u32,
    pub timeout_secs: Option<u64>,
    /// Constant overrides given on the command line, by name.
    pub constants: BTreeMap<String, String>,
    pub precision_bits: usize,
    pub rel_tolerance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvalReport {
    pub config: ConfigEcho,
    /// Every level, in fixed order, including empty ones.
    pub levels: Vec<Line>,
    /// Every topic, in fixed order, including empty ones.
    pub topics: Vec<Line>,
    pub overall: Line,
}

impl EvalReport {
    /// Builds a report from `(level, topic, passed)` outcomes.
    pub fn from_outcomes(
        config: ConfigEcho,
        outcomes: impl IntoIterator<Item = (Level, Topic, bool)>,
    ) -> EvalReport {
        let mut by_level: BTreeMap<Level, Tally> = BTreeMap::new();
        let mut by_topic: BTreeMap<Topic, Tally> = BTreeMap::new();
        for (l, t, ok) in outcomes {
            let one = Tally::new(ok as u64, 1);
            let e = by_level.entry(l).or_default();
            *e = *e + one;
            let e = by_topic.entry(t).or_default();
            *e = *e + one;
        }
        let levels: Vec<Line> = Level::ALL
            .iter()
            .map(|l| Line::new(l.as_str(), by_level.get(l).copied().unwrap_or_default()))
            .collect();
        let topics = Topic::ALL
            .iter()
            .map(|t| Line::new(t.as_str(), by_topic.get(t).copied().unwrap_or_default()))
            .collect();
        let overall = aggregate(&levels.iter().map(Line::tally).collect::<Vec<_>>());
        EvalReport {
            config,
            levels,
            topics,
            overall: Line::new("overall", overall),
        }
    }

    /// Pretty JSON with a trailing newline. Field order is fixed by the
    /// struct definitions.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn cell(l: &Line) -> String {
    if l.total == 0 {
        format!("{}%*", l.percent)
    } else {
        format!("{}%", l.percent)
    }
}

/// `8.65% | 29.03% | 5.88% | 14.50%`: the three levels and the overall.
pub fn level_row(levels: &[Line], overall: &Line) -> String {
    levels
        .iter()
        .chain(std::iter::once(overall))
        .map(cell)
        .collect::<Vec<_>>()
        .join(" | ")
}

/// Text tables. Cells marked `*` have no entries behind them.
pub fn render_report(r: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "prover: {}  k={}  precision={} bits  tolerance={}\n",
        r.config.prover, r.config.k, r.config.precision_bits, r.config.rel_tolerance
    ));
    if !r.config.constants.is_empty() {
        let cs: Vec<String> = r
            .config
            .constants
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        out.push_str(&format!("constants: {}\n", cs.join(", ")));
    }
    out.push('\n');
    out.push_str("College | Comp-Easy | Comp-Hard | Overall\n");
    out.push_str(&level_row(&r.levels, &r.overall));
    out.push('\n');
    let counts: Vec<String> = r
        .levels
        .iter()
        .chain(std::iter::once(&r.overall))
        .map(|l| format!("{}/{}", l.passes, l.total))
        .collect();
    out.push_str(&counts.join(" | "));
    out.push_str("\n\n");
    let width = r.topics.iter().map(|t| t.name.len()).max().unwrap_or(0);
    for t in &r.topics {
        out.push_str(&format!(
            "{:<width$}  {:>3}/{:<3}  {}\n",
            t.name,
            t.passes,
            t.total,
            cell(t)
        ));
    }
    if r.levels.iter().chain(&r.topics).any(|l| l.total == 0) {
        out.push_str("\n* no entries\n");
    }
    out
}
