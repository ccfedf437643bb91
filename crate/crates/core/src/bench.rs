//! Optimality-gap benchmark: an exact reference run per instance, the
//! selected heuristics next to it, and per-bucket aggregates.

use std::fmt::Write;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::{t1_like, t2_like};
use crate::heuristics::HeuristicConfig;
use crate::matrix::BinaryMatrix;
use crate::pipeline::{solve_matrix, Method, SolveOptions};
use crate::tsp::SolverConfig;

#[derive(Clone, Debug)]
pub struct BenchInstance {
    pub id: String,
    pub matrix: BinaryMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bucketing {
    /// One bucket per exact column count.
    Exact,
    /// Inclusive column-count ranges; anything else lands in "other".
    Ranges(Vec<(usize, usize)>),
}

impl Bucketing {
    pub fn t2_default() -> Self {
        Bucketing::Ranges(vec![(20, 50), (51, 75), (76, 100), (101, 125), (126, 144), (145, 160)])
    }

    fn label(&self, cols: usize) -> (usize, String) {
        match self {
            Bucketing::Exact => (cols, cols.to_string()),
            Bucketing::Ranges(r) => match r.iter().position(|&(lo, hi)| lo <= cols && cols <= hi) {
                Some(k) => (k, format!("{}-{}", r[k].0, r[k].1)),
                None => (usize::MAX, "other".into()),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub solver: SolverConfig,
    pub heuristic: HeuristicConfig,
    pub heuristics: Vec<Method>,
    pub bucketing: Bucketing,
    /// Instances solved concurrently.
    pub workers: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            solver: SolverConfig::default(),
            heuristic: HeuristicConfig::default(),
            heuristics: vec![Method::Rodgers, Method::Multiseed],
            bucketing: Bucketing::Exact,
            workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub algorithm: &'static str,
    pub blocks: usize,
    pub runtime_ms: f64,
    /// `100 * (blocks / opt - 1)`, only against a proven optimum.
    pub rel_gap: Option<f64>,
    pub abs_gap: Option<i64>,
    /// Range of the relative gap when the optimum is unproven: against the
    /// best known order and against the lower bound.
    pub rel_gap_interval: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub id: String,
    pub rows: usize,
    pub columns: usize,
    pub distinct_columns: usize,
    pub optimal: bool,
    /// Best exact-run block count (optimal when `optimal`).
    pub blocks: usize,
    pub lower_bound: u64,
    pub runtime_ms: f64,
    pub heuristics: Vec<RunRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeuristicSummary {
    pub algorithm: &'static str,
    pub mean_rel_gap: Option<f64>,
    pub mean_abs_gap: Option<f64>,
    pub mean_runtime_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BucketSummary {
    pub bucket: String,
    pub instances: usize,
    pub proven: usize,
    pub mean_blocks_per_row: Option<f64>,
    pub mean_runtime_ms: f64,
    pub heuristics: Vec<HeuristicSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub seed: u64,
    pub time_limit_s: f64,
    pub instances: Vec<InstanceRecord>,
    pub buckets: Vec<BucketSummary>,
}

/// Relative and absolute gap of `blocks` against `opt`.
pub fn gap(blocks: usize, opt: usize) -> (f64, i64) {
    let rel = if opt == 0 {
        if blocks == 0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        100.0 * (blocks as f64 / opt as f64 - 1.0)
    };
    (rel, blocks as i64 - opt as i64)
}

fn run_instance(inst: &BenchInstance, cfg: &BenchConfig) -> Result<InstanceRecord> {
    let a = &inst.matrix;
    let exact = solve_matrix(
        a,
        &SolveOptions {
            solver: cfg.solver.clone(),
            ..SolveOptions::default()
        },
    )?;
    let lb = exact.lower_bound.unwrap_or(0);
    let mut heuristics = Vec::new();
    for &m in &cfg.heuristics {
        let opts = SolveOptions {
            method: m,
            heuristic: cfg.heuristic.clone(),
            ..SolveOptions::default()
        };
        let h = solve_matrix(a, &opts)?;
        let (rel_gap, abs_gap, rel_gap_interval) = if exact.optimal {
            let (r, g) = gap(h.blocks, exact.blocks);
            (Some(r), Some(g), None)
        } else {
            let lo = gap(h.blocks, exact.blocks).0;
            let hi = gap(h.blocks, lb as usize).0;
            (None, None, Some((lo, hi)))
        };
        heuristics.push(RunRecord {
            algorithm: m.name(),
            blocks: h.blocks,
            runtime_ms: h.runtime_ms,
            rel_gap,
            abs_gap,
            rel_gap_interval,
        });
    }
    Ok(InstanceRecord {
        id: inst.id.clone(),
        rows: a.rows(),
        columns: a.cols(),
        distinct_columns: exact.distinct_columns,
        optimal: exact.optimal,
        blocks: exact.blocks,
        lower_bound: lb,
        runtime_ms: exact.runtime_ms,
        heuristics,
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, k) = xs.fold((0.0, 0usize), |(s, k), x| (s + x, k + 1));
    (k > 0).then(|| s / k as f64)
}

/// Runs every instance; records keep the input order whatever the worker
/// count.
pub fn run_benchmark(instances: &[BenchInstance], cfg: &BenchConfig, seed: u64) -> Result<BenchmarkReport> {
    if instances.is_empty() {
        return Err(Error::InvalidArgument("empty benchmark corpus".into()));
    }
    let workers = cfg.workers.clamp(1, instances.len());
    let records: Vec<Result<InstanceRecord>> = if workers == 1 {
        instances.iter().map(|i| run_instance(i, cfg)).collect()
    } else {
        let mut slots: Vec<Option<Result<InstanceRecord>>> = (0..instances.len()).map(|_| None).collect();
        let next = std::sync::atomic::AtomicUsize::new(0);
        let done = std::sync::Mutex::new(Vec::new());
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let k = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if k >= instances.len() {
                        break;
                    }
                    let r = run_instance(&instances[k], cfg);
                    done.lock().unwrap().push((k, r));
                });
            }
        });
        for (k, r) in done.into_inner().unwrap() {
            slots[k] = Some(r);
        }
        slots.into_iter().map(|r| r.expect("every instance ran")).collect()
    };
    let records: Vec<InstanceRecord> = records.into_iter().collect::<Result<_>>()?;
    let buckets = summarize(&records, cfg);
    Ok(BenchmarkReport {
        seed,
        time_limit_s: cfg.solver.time_limit.as_secs_f64(),
        instances: records,
        buckets,
    })
}

fn summarize(records: &[InstanceRecord], cfg: &BenchConfig) -> Vec<BucketSummary> {
    let mut keys: Vec<(usize, String)> = records.iter().map(|r| cfg.bucketing.label(r.columns)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(key, label)| {
            let members: Vec<&InstanceRecord> = records
                .iter()
                .filter(|r| cfg.bucketing.label(r.columns).0 == key)
                .collect();
            let proven: Vec<&&InstanceRecord> = members.iter().filter(|r| r.optimal).collect();
            let heuristics = cfg
                .heuristics
                .iter()
                .enumerate()
                .map(|(h, m)| HeuristicSummary {
                    algorithm: m.name(),
                    mean_rel_gap: mean(proven.iter().filter_map(|r| r.heuristics[h].rel_gap)),
                    mean_abs_gap: mean(proven.iter().filter_map(|r| r.heuristics[h].abs_gap.map(|g| g as f64))),
                    mean_runtime_ms: mean(members.iter().map(|r| r.heuristics[h].runtime_ms)).unwrap_or(0.0),
                })
                .collect();
            BucketSummary {
                bucket: label,
                instances: members.len(),
                proven: proven.len(),
                mean_blocks_per_row: mean(
                    proven
                        .iter()
                        .filter(|r| r.rows > 0)
                        .map(|r| r.blocks as f64 / r.rows as f64),
                ),
                mean_runtime_ms: mean(members.iter().map(|r| r.runtime_ms)).unwrap_or(0.0),
                heuristics,
            }
        })
        .collect()
}

fn fmt_opt(x: Option<f64>, digits: usize) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.digits$}"))
}

impl BenchmarkReport {
    /// Aligned text table, one line per bucket: exact blocks per row and
    /// runtime, then `rel% / abs` gap and runtime per heuristic. A second
    /// section lists unproven instances with their gap intervals.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self
            .buckets
            .first()
            .map(|b| b.heuristics.iter().map(|h| h.algorithm).collect())
            .unwrap_or_default();
        let _ = write!(out, "{:>9} {:>5} {:>6} {:>10} {:>10}", "columns", "n", "proven", "blocks/row", "exact ms");
        for n in &names {
            let _ = write!(out, " {:>16} {:>10}", format!("{n} gap"), "ms");
        }
        out.push('\n');
        for b in &self.buckets {
            let _ = write!(
                out,
                "{:>9} {:>5} {:>6} {:>10} {:>10.1}",
                b.bucket,
                b.instances,
                b.proven,
                fmt_opt(b.mean_blocks_per_row, 2),
                b.mean_runtime_ms
            );
            for h in &b.heuristics {
                let g = format!("{}% / {}", fmt_opt(h.mean_rel_gap, 1), fmt_opt(h.mean_abs_gap, 1));
                let _ = write!(out, " {:>16} {:>10.1}", g, h.mean_runtime_ms);
            }
            out.push('\n');
        }
        let unproven: Vec<&InstanceRecord> = self.instances.iter().filter(|r| !r.optimal).collect();
        if !unproven.is_empty() {
            let _ = writeln!(out, "\nunproven (lower bound, best known, heuristic gap intervals):");
            for r in unproven {
                let _ = write!(out, "{} lb {} best {}", r.id, r.lower_bound, r.blocks);
                for h in &r.heuristics {
                    if let Some((lo, hi)) = h.rel_gap_interval {
                        let _ = write!(out, "  {} [{lo:.1}%, {hi:.1}%]", h.algorithm);
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Synthetic stand-in for the small hand-made corpus: `per_size` instances
/// for each column count.
pub fn t1_corpus(sizes: &[usize], per_size: usize, seed: u64) -> Vec<BenchInstance> {
    let mut out = Vec::new();
    for &cols in sizes {
        for k in 0..per_size {
            let s = seed
                .wrapping_mul(1_000_003)
                .wrapping_add((cols * 10_000 + k) as u64);
            out.push(BenchInstance {
                id: format!("t1-c{cols}-{k}"),
                matrix: t1_like(cols, s),
            });
        }
    }
    out
}

/// Synthetic stand-in for the recipe corpus: `count` instances of
/// `rows x cols`.
pub fn t2_corpus(rows: usize, cols: usize, count: usize, seed: u64) -> Vec<BenchInstance> {
    (0..count)
        .map(|k| BenchInstance {
            id: format!("t2-r{rows}-c{cols}-{k}"),
            matrix: t2_like(rows, cols, seed.wrapping_mul(1_000_003).wrapping_add(k as u64)),
        })
        .collect()
}

pub const T1_SIZES: [usize; 5] = [10, 20, 30, 50, 70];

impl BenchConfig {
    pub fn with_time_limit(mut self, t: Duration) -> Self {
        self.solver.time_limit = t;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_formula() {
        let (r, a) = gap(11, 10);
        assert!((r - 10.0).abs() < 1e-9 && a == 1);
        assert_eq!(gap(0, 0), (0.0, 0));
    }

    #[test]
    fn c1p_instance_has_zero_gap() {
        let a = BinaryMatrix::from_rows(&[[1u8, 1, 0], [1, 1, 1]]).unwrap();
        let corpus = vec![BenchInstance {
            id: "c1p".into(),
            matrix: a,
        }];
        let report = run_benchmark(&corpus, &BenchConfig::default(), 0).unwrap();
        let b = &report.buckets[0];
        assert_eq!(b.proven, 1);
        for h in &b.heuristics {
            assert_eq!(h.mean_rel_gap, Some(0.0));
            assert_eq!(h.mean_abs_gap, Some(0.0));
        }
        assert!(report.to_table().contains("multiseed"));
        assert!(report.to_json().contains("\"buckets\""));
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(run_benchmark(&[], &BenchConfig::default(), 0).is_err());
    }

    #[test]
    fn workers_keep_order() {
        let corpus = t1_corpus(&[10], 4, 1);
        let one = run_benchmark(&corpus, &BenchConfig::default(), 1).unwrap();
        let two = run_benchmark(
            &corpus,
            &BenchConfig {
                workers: 2,
                ..BenchConfig::default()
            },
            1,
        )
        .unwrap();
        let ids = |r: &BenchmarkReport| r.instances.iter().map(|i| (i.id.clone(), i.blocks)).collect::<Vec<_>>();
        assert_eq!(ids(&one), ids(&two));
    }

    #[test]
    fn range_buckets() {
        let b = Bucketing::t2_default();
        assert_eq!(b.label(160).1, "145-160");
        assert_eq!(b.label(10).1, "other");
    }
}
