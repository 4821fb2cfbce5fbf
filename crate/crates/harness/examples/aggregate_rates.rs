//! Pooled pass rates: overall is total passes over total entries, never a
//! mean of the per-level percentages.
//!
//! `cargo run -p physkernel-harness --example aggregate_rates`

use physkernel_harness::rates::percent_digits;
use physkernel_harness::{aggregate, level_row, Line, Tally};

fn line(name: &str, t: Tally) -> Line {
    Line {
        name: name.into(),
        passes: t.passes,
        total: t.total,
        rate: t.to_string(),
        percent: percent_digits(&t.rate()),
    }
}

fn main() {
    for counts in [[(9, 104), (18, 62), (2, 34)], [(33, 104), (46, 62), (0, 34)]] {
        let tallies: Vec<Tally> = counts.iter().map(|&(p, t)| Tally::new(p, t)).collect();
        let overall = aggregate(&tallies);
        let lines: Vec<Line> = ["college", "comp-easy", "comp-hard"]
            .iter()
            .zip(&tallies)
            .map(|(n, t)| line(n, *t))
            .collect();
        println!("college | comp-easy | comp-hard | overall");
        println!("{}", level_row(&lines, &line("overall", overall)));
        let naive: f64 = tallies.iter().map(|t| t.passes as f64 / t.total as f64).sum::<f64>() / 3.0;
        println!("pooled {overall} = {}, unweighted mean of levels would be {:.2}%\n", overall.percent(), naive * 100.0);
    }
}
