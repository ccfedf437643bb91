//! Symmetric TSP solvers.
//!
//! Exact: brute force (oracle, tiny instances), Held–Karp subset dynamic
//! programming, and depth-first branch-and-bound. Heuristic: nearest
//! neighbour construction improved by 2-opt and Or-opt.

mod bnb;
mod bound;
mod brute;
mod held_karp;
mod heuristic;

use std::time::Duration;

use crate::error::{Error, Result};
use crate::reduction::TspInstance;

pub use bnb::solve_branch_and_bound;
pub use bound::{path_bound, root_lower_bound};
pub use brute::{solve_brute, BRUTE_CAP};
pub use held_karp::solve_held_karp;
pub use heuristic::{is_two_opt_optimal, solve_heuristic};

/// A cyclic visiting order of all vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tour(Vec<usize>);

impl Tour {
    /// Checks that `order` lists distinct vertices `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidTour(format!(
                    "vertex {v} repeated or out of range for {n} vertices"
                )));
            }
        }
        Ok(Tour(order))
    }

    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Tour::new(order.clone()).is_ok());
        Tour(order)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn length(&self, inst: &TspInstance) -> u64 {
        inst.tour_length(&self.0)
    }

    /// Rotation starting at vertex `v`.
    pub fn rotated_to(&self, v: usize) -> Tour {
        match self.0.iter().position(|&x| x == v) {
            Some(k) => Tour(self.0[k..].iter().chain(&self.0[..k]).copied().collect()),
            None => self.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Brute,
    HeldKarp,
    BranchAndBound,
    Heuristic,
    /// Held–Karp up to the vertex cap, branch-and-bound above it.
    Auto,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Brute => "brute",
            Algorithm::HeldKarp => "held_karp",
            Algorithm::BranchAndBound => "branch_and_bound",
            Algorithm::Heuristic => "heuristic",
            Algorithm::Auto => "auto",
        }
    }
}

/// Lower bound used by branch-and-bound on the unvisited vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Spanning tree of the unvisited vertices plus the cheapest links to
    /// both path ends.
    Mst,
    /// The same structure under vertex penalties tuned by subgradient
    /// ascent; never weaker than `Mst` at the root.
    Lagrangian,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub time_limit: Duration,
    pub seed: u64,
    /// Maximum number of improving 2-opt passes.
    pub two_opt_rounds: usize,
    /// Random double-bridge kicks applied after local search converges.
    pub kicks: usize,
    pub held_karp_cap: usize,
    pub bound: BoundKind,
    /// Largest PQ-tree node degree accepted by the constrained solver.
    pub pq_degree_cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            algorithm: Algorithm::Auto,
            time_limit: Duration::from_secs(60),
            seed: 0,
            two_opt_rounds: 10_000,
            kicks: 0,
            held_karp_cap: 22,
            bound: BoundKind::Lagrangian,
            pq_degree_cap: 14,
        }
    }
}

impl SolverConfig {
    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = limit;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub nodes: u64,
    pub elapsed: Duration,
    /// Certified lower bound on the optimal length at termination.
    pub lower_bound: u64,
    pub algorithm: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub tour: Tour,
    pub length: u64,
    /// The length is proven minimal.
    pub optimal: bool,
    pub stats: SolveStats,
}

/// Dispatches on `cfg.algorithm`.
pub fn solve(inst: &TspInstance, cfg: &SolverConfig) -> Result<SolveResult> {
    match cfg.algorithm {
        Algorithm::Brute => solve_brute(inst),
        Algorithm::HeldKarp => solve_held_karp(inst, cfg.held_karp_cap),
        Algorithm::BranchAndBound => Ok(solve_branch_and_bound(inst, cfg)),
        Algorithm::Heuristic => Ok(solve_heuristic(inst, cfg)),
        Algorithm::Auto => {
            if inst.size() <= cfg.held_karp_cap {
                if let Ok(r) = solve_held_karp(inst, cfg.held_karp_cap) {
                    return Ok(r);
                }
            }
            Ok(solve_branch_and_bound(inst, cfg))
        }
    }
}

/// Smallest multiple of `step` that is at least `x`.
pub(crate) fn round_up(x: u64, step: u64) -> u64 {
    x.div_ceil(step) * step
}

#[cfg(test)]
pub(crate) mod testutil {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::reduction::TspInstance;

    pub fn random_instance(size: usize, max_d: u32, seed: u64) -> TspInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        TspInstance::from_fn(size, size - 1, |_, _| rng.gen_range(0..=max_d)).unwrap()
    }
}
