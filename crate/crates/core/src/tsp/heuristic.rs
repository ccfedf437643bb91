use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bound::root_lower_bound;
use super::{round_up, SolveResult, SolveStats, SolverConfig, Tour};
use crate::reduction::TspInstance;

/// Nearest neighbour from the sentinel, then 2-opt and Or-opt until
/// neither improves. With `cfg.kicks > 0` the local optimum is perturbed by
/// seeded double-bridge moves and re-optimized, keeping the best tour.
pub fn solve_heuristic(inst: &TspInstance, cfg: &SolverConfig) -> SolveResult {
    let start = Instant::now();
    let mut tour = nearest_neighbour(inst);
    local_search(inst, &mut tour, cfg.two_opt_rounds);
    let mut length = inst.tour_length(&tour);

    if cfg.kicks > 0 && tour.len() >= 8 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.kicks {
            if start.elapsed() >= cfg.time_limit {
                break;
            }
            let mut cand = double_bridge(&tour, &mut rng);
            local_search(inst, &mut cand, cfg.two_opt_rounds);
            let len = inst.tour_length(&cand);
            if len < length {
                tour = cand;
                length = len;
            }
        }
    }

    let lb = root_lower_bound(inst, 50, length).min(length);
    SolveResult {
        tour: Tour::from_vec_unchecked(tour).rotated_to(inst.sentinel()),
        length,
        optimal: round_up(lb, inst.granularity()) >= length,
        stats: SolveStats {
            nodes: 0,
            elapsed: start.elapsed(),
            lower_bound: lb,
            algorithm: "heuristic",
        },
    }
}

fn nearest_neighbour(inst: &TspInstance) -> Vec<usize> {
    let n = inst.size();
    let mut used = vec![false; n];
    let mut cur = inst.sentinel();
    used[cur] = true;
    let mut tour = vec![cur];
    for _ in 1..n {
        let next = (0..n)
            .filter(|&v| !used[v])
            .min_by_key(|&v| (inst.dist(cur, v), v))
            .unwrap();
        used[next] = true;
        tour.push(next);
        cur = next;
    }
    tour
}

fn local_search(inst: &TspInstance, tour: &mut [usize], rounds: usize) {
    loop {
        two_opt(inst, tour, rounds);
        if !or_opt(inst, tour) {
            break;
        }
    }
}

/// First-improvement 2-opt; returns the number of improving passes.
fn two_opt(inst: &TspInstance, tour: &mut [usize], rounds: usize) -> usize {
    let n = tour.len();
    let mut passes = 0;
    if n < 4 {
        return 0;
    }
    let d = |a: usize, b: usize| inst.dist(a, b) as i64;
    while passes < rounds {
        let mut improved = false;
        for i in 0..n - 2 {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (tour[i], tour[i + 1]);
                let (c, e) = (tour[j], tour[(j + 1) % n]);
                if d(a, c) + d(b, e) < d(a, b) + d(c, e) {
                    tour[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
        passes += 1;
    }
    passes
}

/// Whether no single 2-opt move shortens the tour.
pub fn is_two_opt_optimal(inst: &TspInstance, tour: &[usize]) -> bool {
    let n = tour.len();
    let d = |a: usize, b: usize| inst.dist(a, b) as i64;
    for i in 0..n.saturating_sub(2) {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b) = (tour[i], tour[i + 1]);
            let (c, e) = (tour[j], tour[(j + 1) % n]);
            if d(a, c) + d(b, e) < d(a, b) + d(c, e) {
                return false;
            }
        }
    }
    true
}

/// Moves segments of 1 to 3 vertices elsewhere, either orientation.
/// Returns whether any move was applied.
fn or_opt(inst: &TspInstance, tour: &mut [usize]) -> bool {
    let n = tour.len();
    if n < 5 {
        return false;
    }
    let d = |a: usize, b: usize| inst.dist(a, b) as i64;
    let mut any = false;
    'restart: loop {
        for len in 1..=3 {
            for i in 0..=n - len {
                let seg = &tour[i..i + len];
                let (s0, s1) = (seg[0], seg[len - 1]);
                let prev = tour[(i + n - 1) % n];
                let next = tour[(i + len) % n];
                let gain = d(prev, s0) + d(s1, next) - d(prev, next);
                if gain <= 0 {
                    continue;
                }
                let rest: Vec<usize> = tour[i + len..].iter().chain(&tour[..i]).copied().collect();
                for k in 0..rest.len() {
                    let (x, y) = (rest[k], rest[(k + 1) % rest.len()]);
                    if k + 1 == rest.len() && x == prev && y == next {
                        continue;
                    }
                    let fwd = d(x, s0) + d(s1, y) - d(x, y);
                    let rev = d(x, s1) + d(s0, y) - d(x, y);
                    if fwd.min(rev) < gain {
                        let mut segment = seg.to_vec();
                        if rev < fwd {
                            segment.reverse();
                        }
                        let mut out = Vec::with_capacity(n);
                        out.extend_from_slice(&rest[..=k]);
                        out.extend(segment);
                        out.extend_from_slice(&rest[k + 1..]);
                        tour.copy_from_slice(&out);
                        any = true;
                        continue 'restart;
                    }
                }
            }
        }
        return any;
    }
}

fn double_bridge(tour: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = tour.len();
    let mut cuts = [0usize; 3];
    loop {
        for c in cuts.iter_mut() {
            *c = rng.gen_range(1..n);
        }
        cuts.sort_unstable();
        if cuts[0] < cuts[1] && cuts[1] < cuts[2] {
            break;
        }
    }
    let (a, b, c) = (cuts[0], cuts[1], cuts[2]);
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&tour[..a]);
    out.extend_from_slice(&tour[b..c]);
    out.extend_from_slice(&tour[a..b]);
    out.extend_from_slice(&tour[c..]);
    out
}
