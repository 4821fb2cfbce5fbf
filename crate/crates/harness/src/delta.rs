//! Comparing two result tables model by model.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use thiserror::Error;

use crate::rates::{aggregate, parse_percent, two_decimals, Tally};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeltaError {
    #[error("model sets differ: only in first {only_with:?}, only in second {only_without:?}")]
    MismatchedModels {
        only_with: Vec<String>,
        only_without: Vec<String>,
    },
    #[error("no models to compare")]
    Empty,
}

/// Overall rate of one model, as a percentage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelScore {
    pub model: String,
    pub overall: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaReport {
    /// Percentage points, in the order of the first table.
    pub deltas: Vec<(String, BigRational)>,
    pub mean: BigRational,
}

impl DeltaReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (m, d) in &self.deltas {
            let s = two_decimals(d);
            let sign = if s.starts_with('-') { "" } else { "+" };
            out.push_str(&format!("{m:<24} {sign}{s}\n"));
        }
        out.push_str(&format!("{:<24} {}\n", "mean", two_decimals(&self.mean)));
        out
    }
}

/// `with - without` per model, and the exact mean of those differences.
pub fn improvement_delta(
    with: &[ModelScore],
    without: &[ModelScore],
) -> Result<DeltaReport, DeltaError> {
    let a: BTreeSet<&str> = with.iter().map(|m| m.model.as_str()).collect();
    let b: BTreeSet<&str> = without.iter().map(|m| m.model.as_str()).collect();
    if a != b || a.len() != with.len() || b.len() != without.len() {
        return Err(DeltaError::MismatchedModels {
            only_with: a.difference(&b).map(|s| s.to_string()).collect(),
            only_without: b.difference(&a).map(|s| s.to_string()).collect(),
        });
    }
    if with.is_empty() {
        return Err(DeltaError::Empty);
    }
    let deltas: Vec<(String, BigRational)> = with
        .iter()
        .map(|w| {
            let wo = without.iter().find(|x| x.model == w.model).unwrap();
            (w.model.clone(), &w.overall - &wo.overall)
        })
        .collect();
    let sum = deltas
        .iter()
        .fold(BigRational::zero(), |acc, (_, d)| acc + d);
    let mean = sum / BigRational::from_integer(deltas.len().into());
    Ok(DeltaReport { deltas, mean })
}

/// One row of a published results table: per-level counts plus the overall
/// rate as printed.
#[derive(Debug, Clone, Deserialize)]
pub struct TableRow {
    pub model: String,
    pub college: Tally,
    pub comp_easy: Tally,
    pub comp_hard: Tally,
    pub overall: String,
}

impl TableRow {
    pub fn pooled(&self) -> Tally {
        aggregate(&[self.college, self.comp_easy, self.comp_hard])
    }

    pub fn printed_overall(&self) -> BigRational {
        parse_percent(&self.overall).expect("percentage")
    }

    /// Does the printed overall equal the pooled per-level counts?
    pub fn pooled_consistent(&self) -> bool {
        self.pooled().rate() * BigRational::from_integer(100.into()) == self.printed_overall()
    }

    pub fn score(&self) -> ModelScore {
        ModelScore {
            model: self.model.clone(),
            overall: self.printed_overall(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct ResultTable {
    pub with: Vec<TableRow>,
    pub without: Vec<TableRow>,
}

impl ResultTable {
    pub fn from_json(text: &str) -> serde_json::Result<ResultTable> {
        serde_json::from_str(text)
    }

    /// Deltas of the printed overall rates.
    pub fn as_printed(&self) -> Result<DeltaReport, DeltaError> {
        let w: Vec<_> = self.with.iter().map(TableRow::score).collect();
        let wo: Vec<_> = self.without.iter().map(TableRow::score).collect();
        improvement_delta(&w, &wo)
    }

    /// Deltas after exchanging the two overall cells of `model`.
    pub fn with_overall_swapped(&self, model: &str) -> Result<DeltaReport, DeltaError> {
        let mut w: Vec<_> = self.with.iter().map(TableRow::score).collect();
        let mut wo: Vec<_> = self.without.iter().map(TableRow::score).collect();
        if let (Some(a), Some(b)) = (
            w.iter_mut().find(|m| m.model == model),
            wo.iter_mut().find(|m| m.model == model),
        ) {
            std::mem::swap(&mut a.overall, &mut b.overall);
        }
        improvement_delta(&w, &wo)
    }

    /// Rows whose printed overall disagrees with their own per-level counts.
    pub fn inconsistent_rows(&self) -> Vec<(&'static str, &str)> {
        let mut out = Vec::new();
        for (side, rows) in [("with", &self.with), ("without", &self.without)] {
            for r in rows.iter().filter(|r| !r.pooled_consistent()) {
                out.push((side, r.model.as_str()));
            }
        }
        out
    }
}
