use std::time::Instant;

use super::{SolveResult, SolveStats, Tour};
use crate::error::{Error, Result};
use crate::reduction::TspInstance;

const INF: u32 = u32::MAX;

/// Subset dynamic program over paths starting at vertex 0.
///
/// `best[S][j]` is the shortest path from 0 through exactly the vertices of
/// `S` (a subset of `1..n`) ending at `j`. Only costs are stored; the tour
/// is recovered by searching for the smallest consistent predecessor.
pub fn solve_held_karp(inst: &TspInstance, cap: usize) -> Result<SolveResult> {
    let n = inst.size();
    if n > cap || n > 31 {
        return Err(Error::SizeCap {
            solver: "held_karp",
            size: n,
            cap: cap.min(31),
        });
    }
    if (inst.max_dist() as u64) * (n as u64) >= INF as u64 {
        return Err(Error::InvalidArgument(
            "distances too large for the 32-bit dynamic program".into(),
        ));
    }
    let start = Instant::now();
    if n <= 2 {
        let order: Vec<usize> = (0..n).collect();
        let length = inst.tour_length(&order);
        return Ok(finish(order, length, 0, start));
    }

    let k = n - 1;
    let full = (1usize << k) - 1;
    let d = |a: usize, b: usize| inst.dist(a, b);
    let mut best = vec![INF; (full + 1) * k];
    for j in 0..k {
        best[(1 << j) * k + j] = d(0, j + 1);
    }
    for mask in 1..=full {
        let row = mask * k;
        for j in 0..k {
            let cur = best[row + j];
            if cur == INF || mask >> j & 1 == 0 {
                continue;
            }
            let dj = inst.row(j + 1);
            let mut rest = full & !mask;
            while rest != 0 {
                let l = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let next = (mask | 1 << l) * k + l;
                let cand = cur + dj[l + 1];
                if cand < best[next] {
                    best[next] = cand;
                }
            }
        }
    }

    let row = full * k;
    let (mut last, length) = (0..k)
        .map(|j| (j, best[row + j] as u64 + d(j + 1, 0) as u64))
        .min_by_key(|&(j, len)| (len, j))
        .unwrap();

    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    loop {
        order.push(last + 1);
        let cost = best[mask * k + last];
        let prev = mask & !(1 << last);
        if prev == 0 {
            break;
        }
        last = (0..k)
            .find(|&i| {
                prev >> i & 1 == 1
                    && best[prev * k + i] != INF
                    && best[prev * k + i] + d(i + 1, last + 1) == cost
            })
            .expect("a consistent predecessor exists");
        mask = prev;
    }
    order.push(0);
    order.reverse();
    Ok(finish(order, length, ((full + 1) * k) as u64, start))
}

fn finish(order: Vec<usize>, length: u64, nodes: u64, start: Instant) -> SolveResult {
    SolveResult {
        tour: Tour::from_vec_unchecked(order),
        length,
        optimal: true,
        stats: SolveStats {
            nodes,
            elapsed: start.elapsed(),
            lower_bound: length,
            algorithm: "held_karp",
        },
    }
}
