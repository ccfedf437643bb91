//! Command-line front end. Exit codes: 0 success, 1 other failure,
//! 2 unreadable input, 3 infeasible constraint, 4 time limit hit under
//! `--require-optimal`. `verify` exits 1 when a property fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bench::{run_benchmark, t1_corpus, t2_corpus, BenchConfig, BenchInstance, Bucketing, T1_SIZES};
use crate::error::Error;
use crate::formats::{matrix_to_text, parse_edge_list, parse_matrix_text, parse_weights};
use crate::gen::{hampath_gadget, random_matrix, t1_like, t2_like, SimpleGraph};
use crate::heuristics::HeuristicConfig;
use crate::matrix::{BinaryMatrix, ColumnPermutation};
use crate::pipeline::{reduction_instance, solve_matrix, Constraint, Method, SolveOptions};
use crate::pqtree::PQTree;
use crate::reduction::{export_tsplib, RowWeights};
use crate::render::{render_svg, render_text, RenderStyle};
use crate::setsystem::SetSystem;
use crate::tsp::{Algorithm, SolverConfig};

#[derive(Debug, Parser)]
#[command(name = "lindiag", version, about = "Linear diagram column orderings with the fewest segments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order the columns of a matrix (.txt) or set system (.json).
    Solve(SolveArgs),
    /// Exact optimum against heuristics, bucketed by column count.
    Bench(BenchArgs),
    /// Generate instances.
    Gen(GenArgs),
    /// Draw a linear diagram as SVG or text.
    Render(RenderArgs),
    /// Run the seeded property suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HeuristicArg {
    Rodgers,
    Multiseed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Auto,
    Brute,
    HeldKarp,
    BranchAndBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub input: PathBuf,
    /// Exact solve (the default).
    #[arg(long, conflicts_with = "heuristic")]
    pub exact: bool,
    #[arg(long, value_enum)]
    pub heuristic: Option<HeuristicArg>,
    /// Two rows (indices, or set names for JSON input) drawn as one segment each.
    #[arg(long, value_name = "I,J", conflicts_with_all = ["weights", "pqtree"])]
    pub fix_rows: Option<String>,
    /// One positive integer per row.
    #[arg(long, value_name = "FILE", conflicts_with = "pqtree")]
    pub weights: Option<PathBuf>,
    /// Admissible orders as a PQ-tree, e.g. `( [0 1 2] (3 4) )`.
    #[arg(long, value_name = "FILE")]
    pub pqtree: Option<PathBuf>,
    #[arg(long)]
    pub no_collapse: bool,
    #[arg(long, value_name = "SECS", default_value_t = 60.0)]
    pub time_limit: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restarts of the multiseed heuristic.
    #[arg(long, default_value_t = 100)]
    pub seeds: usize,
    /// 2-opt polish of heuristic orders.
    #[arg(long)]
    pub polish: bool,
    #[arg(long, value_enum, default_value = "auto")]
    pub algorithm: AlgorithmArg,
    #[arg(long, value_name = "FILE")]
    pub export_tsplib: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Exit 4 unless optimality is proven.
    #[arg(long)]
    pub require_optimal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    T1,
    T2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BucketArg {
    Exact,
    T2,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["corpus", "synthetic"])))]
pub struct BenchArgs {
    /// Directory of .txt / .json instances.
    pub corpus: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub synthetic: Option<Family>,
    /// Instances per column count (t1) or in total (t2).
    #[arg(long)]
    pub count: Option<usize>,
    /// Column counts of the t1 family.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 20)]
    pub rows: usize,
    #[arg(long, default_value_t = 160)]
    pub cols: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "SECS", default_value_t = 60.0)]
    pub time_limit: f64,
    #[arg(long, default_value_t = 100)]
    pub seeds: usize,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum)]
    pub buckets: Option<BucketArg>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Also write the JSON report here.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["gadget", "random", "family"])))]
pub struct GenArgs {
    /// Incidence matrix of an edge list (`u v` per line).
    #[arg(long, value_name = "EDGES")]
    pub gadget: Option<PathBuf>,
    /// Independent entries with probability `--density`.
    #[arg(long)]
    pub random: bool,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long, default_value_t = 10)]
    pub rows: usize,
    #[arg(long, default_value_t = 10)]
    pub cols: usize,
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write this many instances into the `--output` directory.
    #[arg(long)]
    pub count: Option<usize>,
    /// Emit a set-system JSON document instead of matrix text.
    #[arg(long)]
    pub json: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Svg,
    Text,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub input: PathBuf,
    /// Column order, e.g. `0,2,1`; identity when omitted.
    #[arg(long, value_delimiter = ',', conflicts_with = "solve")]
    pub order: Option<Vec<usize>>,
    /// Use an optimal order.
    #[arg(long)]
    pub solve: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Defaults to svg with `--output`, text otherwise.
    #[arg(long, value_enum)]
    pub format: Option<RenderFormat>,
    #[arg(long, default_value_t = 18)]
    pub cell_width: u32,
    #[arg(long, default_value_t = 22)]
    pub cell_height: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn input(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::new(2, format!("{}: {e}", path.display()))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => 2,
            Error::Infeasible(_) | Error::EmptyRow(_) => 3,
            _ => 1,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(1, e.to_string())
    }
}

type CliResult = std::result::Result<i32, CliError>;

/// Parses `args` and runs the command; returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let _ = write!(err, "{e}");
            if e.use_stderr() {
                2
            } else {
                let _ = write!(out, "{e}");
                0
            }
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let r = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Render(a) => cmd_render(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(path, e))
}

/// Matrix plus the set system when the input is JSON.
pub fn load_input(path: &Path) -> std::result::Result<(BinaryMatrix, Option<SetSystem>), CliError> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let s = SetSystem::from_json(&text).map_err(|e| CliError::input(path, e))?;
        Ok((s.to_matrix(), Some(s)))
    } else {
        let a = parse_matrix_text(&text).map_err(|e| CliError::input(path, e))?;
        Ok((a, None))
    }
}

fn parse_fix_rows(spec: &str, sets: Option<&SetSystem>, rows: usize) -> std::result::Result<(usize, usize), CliError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::new(2, format!("--fix-rows expects I,J, got {spec:?}")));
    }
    let resolve = |p: &str| -> std::result::Result<usize, CliError> {
        let i = match p.parse::<usize>() {
            Ok(i) => i,
            Err(_) => sets
                .and_then(|s| s.set_index(p))
                .ok_or_else(|| CliError::new(2, format!("unknown row {p:?}")))?,
        };
        if i >= rows {
            return Err(CliError::new(2, format!("row {i} out of range ({rows} rows)")));
        }
        Ok(i)
    };
    Ok((resolve(parts[0])?, resolve(parts[1])?))
}

fn secs(s: f64) -> std::result::Result<Duration, CliError> {
    Duration::try_from_secs_f64(s).map_err(|_| CliError::new(2, format!("bad time limit {s}")))
}

fn solve_options(a: &SolveArgs, m: &BinaryMatrix, sets: Option<&SetSystem>) -> std::result::Result<SolveOptions, CliError> {
    let constraint = if let Some(spec) = &a.fix_rows {
        let (i, j) = parse_fix_rows(spec, sets, m.rows())?;
        Constraint::FixRows(i, j)
    } else if let Some(path) = &a.weights {
        let w = parse_weights(&read(path)?).map_err(|e| CliError::input(path, e))?;
        Constraint::Weights(RowWeights::new(w).map_err(|e| CliError::input(path, e))?)
    } else if let Some(path) = &a.pqtree {
        Constraint::PqTree(PQTree::parse(&read(path)?).map_err(|e| CliError::input(path, e))?)
    } else {
        Constraint::None
    };
    let algorithm = match a.algorithm {
        AlgorithmArg::Auto => Algorithm::Auto,
        AlgorithmArg::Brute => Algorithm::Brute,
        AlgorithmArg::HeldKarp => Algorithm::HeldKarp,
        AlgorithmArg::BranchAndBound => Algorithm::BranchAndBound,
    };
    Ok(SolveOptions {
        method: match a.heuristic {
            None => Method::Exact,
            Some(HeuristicArg::Rodgers) => Method::Rodgers,
            Some(HeuristicArg::Multiseed) => Method::Multiseed,
        },
        constraint,
        collapse: !a.no_collapse,
        solver: SolverConfig {
            algorithm,
            time_limit: secs(a.time_limit)?,
            seed: a.seed,
            ..SolverConfig::default()
        },
        heuristic: HeuristicConfig {
            seeds: a.seeds.max(1),
            seed: a.seed,
            polish: a.polish,
            ..HeuristicConfig::default()
        },
    })
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> CliResult {
    let (m, sets) = load_input(&a.input)?;
    let opts = solve_options(a, &m, sets.as_ref())?;
    if let Some(path) = &a.export_tsplib {
        let built = reduction_instance(&m, &opts)?;
        let name = a.input.file_stem().map_or("instance".into(), |s| s.to_string_lossy().into_owned());
        fs::write(path, export_tsplib(&built.instance, &name))?;
    }
    let s = solve_matrix(&m, &opts)?;
    match a.format {
        Format::Json => {
            let mut v = serde_json::to_value(&s).expect("solution serializes");
            v["seed"] = json!(a.seed);
            if let Some(sets) = &sets {
                v["elements"] = json!(s.order.iter().map(|&j| &sets.elements()[j]).collect::<Vec<_>>());
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        }
        Format::Table => {
            let status = if s.optimal { "optimal" } else { "not proven optimal" };
            write!(
                out,
                "blocks {} ({status}", s.blocks
            )?;
            if let Some(lb) = s.lower_bound {
                write!(out, ", lower bound {lb}")?;
            }
            if let Some(w) = s.weighted_blocks {
                write!(out, ", weighted {w}")?;
            }
            writeln!(
                out,
                ") via {} in {:.1} ms, {} of {} columns distinct, seed {}",
                s.algorithm, s.runtime_ms, s.distinct_columns, s.columns, a.seed
            )?;
            write!(out, "{}", render_text(&m, &s.permutation())?)?;
        }
    }
    if a.require_optimal && !s.optimal {
        return Err(CliError::new(4, "time limit reached before optimality was proven"));
    }
    Ok(0)
}

fn load_corpus(dir: &Path) -> std::result::Result<Vec<BenchInstance>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::input(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "txt" || e == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            Ok(BenchInstance {
                id: p.file_stem().unwrap_or_default().to_string_lossy().into_owned(),
                matrix: load_input(p)?.0,
            })
        })
        .collect()
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CliResult {
    let corpus = match (&a.corpus, a.synthetic) {
        (Some(dir), _) => load_corpus(dir)?,
        (None, Some(Family::T1)) => {
            let sizes = a.sizes.clone().unwrap_or(T1_SIZES.to_vec());
            t1_corpus(&sizes, a.count.unwrap_or(4), a.seed)
        }
        (None, _) => t2_corpus(a.rows, a.cols, a.count.unwrap_or(50), a.seed),
    };
    if corpus.is_empty() {
        return Err(CliError::new(2, "empty corpus"));
    }
    let bucketing = match a.buckets {
        Some(BucketArg::T2) => Bucketing::t2_default(),
        Some(BucketArg::Exact) => Bucketing::Exact,
        None if a.synthetic == Some(Family::T2) => Bucketing::t2_default(),
        None => Bucketing::Exact,
    };
    let cfg = BenchConfig {
        solver: SolverConfig::default().with_time_limit(secs(a.time_limit)?).with_seed(a.seed),
        heuristic: HeuristicConfig {
            seeds: a.seeds.max(1),
            seed: a.seed,
            ..HeuristicConfig::default()
        },
        bucketing,
        workers: a.workers,
        ..BenchConfig::default()
    };
    let report = run_benchmark(&corpus, &cfg, a.seed)?;
    if let Some(path) = &a.output {
        fs::write(path, report.to_json())?;
    }
    match a.format {
        Format::Json => writeln!(out, "{}", report.to_json())?,
        Format::Table => write!(out, "{}", report.to_table())?,
    }
    Ok(0)
}

fn matrix_output(m: &BinaryMatrix, as_json: bool) -> String {
    if as_json {
        SetSystem::from_matrix_default_names(m).to_json()
    } else {
        matrix_to_text(m)
    }
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> CliResult {
    if let Some(path) = &a.gadget {
        let edges = parse_edge_list(&read(path)?).map_err(|e| CliError::input(path, e))?;
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let g = SimpleGraph::new(n, edges).map_err(|e| CliError::input(path, e))?;
        let gadget = hampath_gadget(&g)?;
        if let Some(o) = &a.output {
            fs::write(o, matrix_output(&gadget.matrix, a.json))?;
        }
        let rows: Vec<String> = matrix_to_text(&gadget.matrix).lines().map(String::from).collect();
        let doc = json!({
            "vertices": n,
            "edges": gadget.matrix.rows(),
            "matrix": rows,
            "threshold": gadget.threshold,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        return Ok(0);
    }
    let make = |seed: u64| -> Result<BinaryMatrix, Error> {
        match a.family {
            Some(Family::T1) => Ok(t1_like(a.cols, seed)),
            Some(Family::T2) => Ok(t2_like(a.rows, a.cols, seed)),
            None => random_matrix(a.rows, a.cols, a.density, seed),
        }
    };
    let ext = if a.json { "json" } else { "txt" };
    match (a.count, &a.output) {
        (Some(count), Some(dir)) => {
            fs::create_dir_all(dir)?;
            for k in 0..count {
                let seed = a.seed.wrapping_add(k as u64);
                let path = dir.join(format!("inst-{k:04}.{ext}"));
                fs::write(&path, matrix_output(&make(seed)?, a.json))?;
            }
            writeln!(out, "{}", json!({"count": count, "dir": dir, "seed": a.seed}))?;
        }
        (Some(_), None) => return Err(CliError::new(2, "--count needs an --output directory")),
        (None, Some(path)) => {
            let m = make(a.seed)?;
            fs::write(path, matrix_output(&m, a.json))?;
            writeln!(out, "{}", json!({"rows": m.rows(), "cols": m.cols(), "path": path, "seed": a.seed}))?;
        }
        (None, None) => write!(out, "{}", matrix_output(&make(a.seed)?, a.json))?,
    }
    Ok(0)
}

pub fn cmd_render(a: &RenderArgs, out: &mut dyn Write) -> CliResult {
    let (m, sets) = load_input(&a.input)?;
    let p = if a.solve {
        solve_matrix(&m, &SolveOptions::default())?.permutation()
    } else if let Some(order) = &a.order {
        ColumnPermutation::new(order.clone()).map_err(|e| CliError::new(2, e.to_string()))?
    } else {
        ColumnPermutation::identity(m.cols())
    };
    if p.len() != m.cols() {
        return Err(CliError::new(2, format!("order has {} columns, input has {}", p.len(), m.cols())));
    }
    let format = a.format.unwrap_or(if a.output.is_some() { RenderFormat::Svg } else { RenderFormat::Text });
    let body = match format {
        RenderFormat::Text => render_text(&m, &p)?,
        RenderFormat::Svg => {
            let sets = sets.unwrap_or_else(|| SetSystem::from_matrix_default_names(&m));
            let style = RenderStyle {
                cell_width: a.cell_width,
                cell_height: a.cell_height,
                ..RenderStyle::default()
            };
            render_svg(&sets, &p, &style)?
        }
    };
    match &a.output {
        Some(path) => {
            fs::write(path, body)?;
            let doc = json!({"output": path, "order": p.as_slice(), "segments": m.cons1_under(p.as_slice())});
            writeln!(out, "{doc}")?;
        }
        None => write!(out, "{body}")?,
    }
    Ok(0)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    let results = crate::verify::run_all(a.trials, a.seed);
    let mut failed = 0;
    for r in &results {
        match &r.failure {
            None => writeln!(out, "ok    {} ({} trials)", r.name, r.trials)?,
            Some(msg) => {
                failed += 1;
                writeln!(out, "FAIL  {}: {msg}", r.name)?;
            }
        }
    }
    writeln!(out, "seed {}, {} properties, {failed} failed", a.seed, results.len())?;
    Ok(if failed == 0 { 0 } else { 1 })
}
