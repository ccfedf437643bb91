//! End-to-end ordering of a matrix: collapse duplicate columns, build the
//! tour instance for the requested variant, solve, cut the tour at the
//! sentinel and expand back to the original columns.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heuristics::{multiseed_order, polish_two_opt, rodgers_order, HeuristicConfig};
use crate::matrix::{collapse_duplicates, expand_permutation, BinaryMatrix, CollapseMap, ColumnPermutation};
use crate::pqtree::{constrained_min_cons1, PQTree};
use crate::reduction::{
    build_grouped, build_plain, build_weighted, groups_from_two_rows, tour_to_permutation,
    RowWeights, TspInstance,
};
use crate::tsp::{solve, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Rodgers,
    Multiseed,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Rodgers => "rodgers",
            Method::Multiseed => "multiseed",
        }
    }
}

/// Extra requirement on the order. At most one applies per solve.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum Constraint {
    #[default]
    None,
    /// Both rows must form a single segment.
    FixRows(usize, usize),
    /// Minimize the weighted block count instead.
    Weights(RowWeights),
    /// Restrict to the orders a PQ-tree admits.
    PqTree(PQTree),
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub method: Method,
    pub constraint: Constraint,
    /// Merge identical columns before solving. Ignored under a PQ-tree.
    pub collapse: bool,
    pub solver: SolverConfig,
    pub heuristic: HeuristicConfig,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: Method::Exact,
            constraint: Constraint::None,
            collapse: true,
            solver: SolverConfig::default(),
            heuristic: HeuristicConfig::default(),
        }
    }
}

impl SolveOptions {
    pub fn with_constraint(mut self, c: Constraint) -> Self {
        self.constraint = c;
        self
    }

    pub fn with_method(mut self, m: Method) -> Self {
        self.method = m;
        self
    }

    pub fn with_time_limit(mut self, t: Duration) -> Self {
        self.solver.time_limit = t;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Solution {
    pub order: Vec<usize>,
    /// Block count of the input matrix under `order`.
    pub blocks: usize,
    /// `sum_i w[i] * blocks_i` when weights were given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weighted_blocks: Option<u64>,
    /// The objective is proven minimal for the chosen variant.
    pub optimal: bool,
    /// Certified lower bound on the objective, when one is known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<u64>,
    pub runtime_ms: f64,
    pub method: &'static str,
    pub algorithm: &'static str,
    pub columns: usize,
    pub distinct_columns: usize,
}

impl Solution {
    pub fn permutation(&self) -> ColumnPermutation {
        ColumnPermutation::new(self.order.clone()).expect("solutions hold permutations")
    }

    /// The quantity that was minimized.
    pub fn objective(&self) -> u64 {
        self.weighted_blocks.unwrap_or(self.blocks as u64)
    }
}

/// Orders the columns of `a` as requested.
///
/// Errors with [`Error::Infeasible`] when fixed rows end up split, which
/// only happens if the exact search stopped early.
pub fn solve_matrix(a: &BinaryMatrix, opts: &SolveOptions) -> Result<Solution> {
    let start = Instant::now();
    if let Constraint::Weights(w) = &opts.constraint {
        if w.len() != a.rows() {
            return Err(Error::LengthMismatch {
                what: "row weights",
                expected: a.rows(),
                found: w.len(),
            });
        }
    }
    match opts.method {
        Method::Exact => solve_exact(a, opts, start),
        m => {
            if opts.constraint != Constraint::None {
                return Err(Error::InvalidArgument(format!(
                    "the {} heuristic takes no constraints",
                    m.name()
                )));
            }
            let p = match m {
                Method::Rodgers => rodgers_order(a),
                _ => multiseed_order(a, &opts.heuristic),
            };
            let p = if opts.heuristic.polish && m == Method::Rodgers {
                polish_two_opt(a, &p)
            } else {
                p
            };
            Ok(finish(a, p, opts, false, None, m.name(), a.cols(), start))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    a: &BinaryMatrix,
    p: ColumnPermutation,
    opts: &SolveOptions,
    optimal: bool,
    lower_bound: Option<u64>,
    algorithm: &'static str,
    distinct: usize,
    start: Instant,
) -> Solution {
    let order = p.into_vec();
    let weighted_blocks = match &opts.constraint {
        Constraint::Weights(w) => Some(a.weighted_cons1_under(w.as_slice(), &order)),
        _ => None,
    };
    Solution {
        blocks: a.cons1_under(&order),
        order,
        weighted_blocks,
        optimal,
        lower_bound,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        method: opts.method.name(),
        algorithm,
        columns: a.cols(),
        distinct_columns: distinct,
    }
}

/// Tour instance an exact solve works on.
pub struct BuiltInstance {
    pub instance: TspInstance,
    /// Maps instance vertices (other than the sentinel) back to columns.
    pub map: CollapseMap,
    /// Tour length minus twice the objective for orders meeting the
    /// constraint.
    pub offset: u64,
}

/// Builds the tour instance for `opts.constraint`. A PQ-tree constraint is
/// not a distance change, so it yields the plain uncollapsed instance.
pub fn reduction_instance(a: &BinaryMatrix, opts: &SolveOptions) -> Result<BuiltInstance> {
    let collapse = opts.collapse && !matches!(opts.constraint, Constraint::PqTree(_));
    let (c, map) = if collapse {
        collapse_duplicates(a)
    } else {
        (a.clone(), CollapseMap::singletons(a.cols()))
    };
    let (instance, offset) = match &opts.constraint {
        Constraint::None | Constraint::PqTree(_) => (build_plain(&c), 0),
        Constraint::Weights(w) => (build_weighted(&c, w)?, 0),
        Constraint::FixRows(i, j) => {
            let g = groups_from_two_rows(&c, *i, *j)?;
            // a consecutive group is entered and left exactly once
            let offset = 2 * g.penalty() as u64 * g.groups().len() as u64;
            (build_grouped(&c, &g), offset)
        }
    };
    Ok(BuiltInstance {
        instance,
        map,
        offset,
    })
}

fn solve_exact(a: &BinaryMatrix, opts: &SolveOptions, start: Instant) -> Result<Solution> {
    if let Constraint::PqTree(t) = &opts.constraint {
        let (p, value) = constrained_min_cons1(a, t, &opts.solver)?;
        return Ok(finish(a, p, opts, true, Some(value), "pqtree_dp", a.cols(), start));
    }
    let built = reduction_instance(a, opts)?;
    let (inst, map, offset) = (built.instance, built.map, built.offset);
    let r = solve(&inst, &opts.solver)?;
    let p = expand_permutation(&tour_to_permutation(&r.tour, &inst)?, &map)?;
    let lb = r.stats.lower_bound.saturating_sub(offset).div_ceil(2);
    if let Constraint::FixRows(i, j) = opts.constraint {
        for row in [i, j] {
            if a.row_cons1_under(row, p.as_slice()) != 1 {
                return Err(Error::Infeasible(format!(
                    "row {row} is split; the search stopped before satisfying the fixed rows"
                )));
            }
        }
    }
    Ok(finish(a, p, opts, r.optimal, Some(lb), r.stats.algorithm, map.len(), start))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BinaryMatrix {
        BinaryMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn split_row_is_joined() {
        let s = solve_matrix(&m(&[&[1, 0, 1]]), &SolveOptions::default()).unwrap();
        assert_eq!((s.blocks, s.optimal), (1, true));
        assert_eq!(s.lower_bound, Some(1));
    }

    #[test]
    fn fixed_rows_hold() {
        let a = m(&[&[1, 0, 1, 0], &[0, 1, 0, 1], &[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let s = solve_matrix(&a, &SolveOptions::default().with_constraint(Constraint::FixRows(2, 3))).unwrap();
        assert_eq!(a.row_cons1_under(2, &s.order), 1);
        assert_eq!(a.row_cons1_under(3, &s.order), 1);
        assert!(s.optimal);
        assert_eq!(s.lower_bound, Some(s.blocks as u64));
    }

    #[test]
    fn unit_weights_match_plain() {
        let a = crate::gen::random_matrix(6, 7, 0.4, 11).unwrap();
        let plain = solve_matrix(&a, &SolveOptions::default()).unwrap();
        let w = Constraint::Weights(RowWeights::unit(6));
        let weighted = solve_matrix(&a, &SolveOptions::default().with_constraint(w)).unwrap();
        assert_eq!(weighted.weighted_blocks, Some(plain.blocks as u64));
    }

    #[test]
    fn heuristics_reject_constraints() {
        let opts = SolveOptions::default()
            .with_method(Method::Rodgers)
            .with_constraint(Constraint::FixRows(0, 1));
        assert!(solve_matrix(&m(&[&[1, 0], &[0, 1]]), &opts).is_err());
    }

    #[test]
    fn collapsing_keeps_duplicates_together() {
        let a = m(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let s = solve_matrix(&a, &SolveOptions::default()).unwrap();
        assert_eq!((s.blocks, s.distinct_columns), (2, 2));
    }
}
