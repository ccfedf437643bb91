use std::time::Instant;

use super::{SolveResult, SolveStats, Tour};
use crate::error::{Error, Result};
use crate::reduction::TspInstance;

/// Largest instance the enumeration oracle accepts.
pub const BRUTE_CAP: usize = 10;

/// Enumerates every tour with vertex 0 first, in lexicographic order; the
/// first minimum found wins.
pub fn solve_brute(inst: &TspInstance) -> Result<SolveResult> {
    let n = inst.size();
    if n > BRUTE_CAP {
        return Err(Error::SizeCap {
            solver: "brute",
            size: n,
            cap: BRUTE_CAP,
        });
    }
    let start = Instant::now();
    let mut path = vec![0];
    let mut used = vec![false; n];
    used[0] = true;
    let mut best = (u64::MAX, Vec::new());
    let mut nodes = 0;
    extend(inst, &mut path, &mut used, 0, &mut best, &mut nodes);
    let (length, order) = best;
    Ok(SolveResult {
        tour: Tour::from_vec_unchecked(order),
        length,
        optimal: true,
        stats: SolveStats {
            nodes,
            elapsed: start.elapsed(),
            lower_bound: length,
            algorithm: "brute",
        },
    })
}

fn extend(
    inst: &TspInstance,
    path: &mut Vec<usize>,
    used: &mut [bool],
    cost: u64,
    best: &mut (u64, Vec<usize>),
    nodes: &mut u64,
) {
    *nodes += 1;
    let n = inst.size();
    let last = *path.last().unwrap();
    if path.len() == n {
        let total = cost + inst.dist(last, path[0]) as u64;
        if total < best.0 {
            *best = (total, path.clone());
        }
        return;
    }
    for v in 0..n {
        if used[v] {
            continue;
        }
        used[v] = true;
        path.push(v);
        extend(inst, path, used, cost + inst.dist(last, v) as u64, best, nodes);
        path.pop();
        used[v] = false;
    }
}
