//! How far the greedy orderings land from the optimum on random instances.
//!
//! `cargo run --release --example heuristic_gap`

use std::time::Duration;

use lindiag::bench::{run_benchmark, t1_corpus, BenchConfig};
use lindiag::tsp::SolverConfig;

fn main() -> lindiag::Result<()> {
    let corpus = t1_corpus(&[10, 20, 30], 5, 1);
    let cfg = BenchConfig {
        solver: SolverConfig::default().with_time_limit(Duration::from_secs(10)),
        ..BenchConfig::default()
    };
    let report = run_benchmark(&corpus, &cfg, 1)?;
    print!("{}", report.to_table());
    Ok(())
}
