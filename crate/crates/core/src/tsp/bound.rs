//! Lower bounds on the cheapest completion of a partial tour.
//!
//! A partial tour is a path from the start vertex `s` to its current end
//! `e`. Any completion is a Hamiltonian path from `e` through the unvisited
//! set `U` back to `s`, hence costs at least
//!
//! ```text
//! MST(U) + min_u c(e, u) + min_u c(s, u)
//! ```
//!
//! (two distinct cheapest links when `e == s`). Adding penalties `pi[u]` to
//! every edge incident to `u` shifts the cost of every completion by exactly
//! `2 * sum(pi)`, so the bound stays valid for any penalties; subgradient
//! ascent on the vertex degrees of the bounding structure tightens it.

use crate::reduction::TspInstance;

const EPS: f64 = 1e-7;

pub(crate) struct BoundWork {
    key: Vec<f64>,
    parent: Vec<usize>,
    in_tree: Vec<bool>,
    degree: Vec<i32>,
    /// Penalties of the best bound seen by the last ascent.
    pub(crate) best_pi: Vec<f64>,
}

impl BoundWork {
    pub(crate) fn new(n: usize) -> Self {
        BoundWork {
            key: vec![0.0; n],
            parent: vec![0; n],
            in_tree: vec![false; n],
            degree: vec![0; n],
            best_pi: vec![0.0; n],
        }
    }
}

/// Evaluates the bound for fixed penalties; degrees land in `work.degree`
/// indexed like `unvisited`.
fn evaluate(
    inst: &TspInstance,
    s: usize,
    e: usize,
    unvisited: &[usize],
    pi: &[f64],
    work: &mut BoundWork,
) -> f64 {
    let r = unvisited.len();
    let BoundWork {
        key,
        parent,
        in_tree,
        degree,
        ..
    } = work;
    for k in 0..r {
        key[k] = f64::INFINITY;
        in_tree[k] = false;
        degree[k] = 0;
    }
    let mut total = 0.0;
    key[0] = 0.0;
    parent[0] = usize::MAX;
    for _ in 0..r {
        let mut pick = usize::MAX;
        let mut best = f64::INFINITY;
        for k in 0..r {
            if !in_tree[k] && key[k] < best {
                best = key[k];
                pick = k;
            }
        }
        in_tree[pick] = true;
        total += best;
        if parent[pick] != usize::MAX {
            degree[pick] += 1;
            degree[parent[pick]] += 1;
        }
        let u = unvisited[pick];
        let row = inst.row(u);
        let pu = pi[u];
        for k in 0..r {
            if !in_tree[k] {
                let v = unvisited[k];
                let c = row[v] as f64 + pu + pi[v];
                if c < key[k] {
                    key[k] = c;
                    parent[k] = pick;
                }
            }
        }
    }

    let link = |from: usize, skip: usize| {
        let row = inst.row(from);
        let mut best = (f64::INFINITY, usize::MAX);
        for (k, &u) in unvisited.iter().enumerate() {
            if k == skip {
                continue;
            }
            let c = row[u] as f64 + pi[u];
            if c < best.0 {
                best = (c, k);
            }
        }
        best
    };
    let (c1, k1) = link(s, usize::MAX);
    let (c2, k2) = match (e == s, r) {
        (true, 1) => (c1, k1),
        (true, _) => link(s, k1),
        (false, _) => link(e, usize::MAX),
    };
    degree[k1] += 1;
    degree[k2] += 1;
    let penalty: f64 = unvisited.iter().map(|&u| pi[u]).sum();
    total + c1 + c2 - 2.0 * penalty
}

/// Best bound over at most `iterations` subgradient steps, starting from
/// (and updating) `pi`. Stops early once the bound exceeds `target`, the
/// value at which the caller can prune.
pub(crate) fn lagrangian_bound(
    inst: &TspInstance,
    s: usize,
    e: usize,
    unvisited: &[usize],
    pi: &mut [f64],
    iterations: usize,
    target: f64,
    work: &mut BoundWork,
) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let mut step_scale = 2.0;
    let mut stall = 0;
    let iterations = iterations.max(1);
    // long ascents (at the root) get a patience proportional to the size
    let patience = if iterations >= 100 {
        (unvisited.len() / 4).max(5)
    } else {
        3
    };
    for it in 0..iterations {
        let value = evaluate(inst, s, e, unvisited, pi, work);
        if value > best + EPS {
            best = value;
            stall = 0;
            work.best_pi.resize(pi.len(), 0.0);
            work.best_pi.copy_from_slice(pi);
        } else {
            stall += 1;
            if stall >= patience {
                step_scale *= 0.5;
                stall = 0;
            }
        }
        if best > target || it + 1 == iterations {
            break;
        }
        let norm: i64 = work.degree[..unvisited.len()]
            .iter()
            .map(|&g| ((g - 2) * (g - 2)) as i64)
            .sum();
        if norm == 0 {
            // the bounding structure is itself a completion
            break;
        }
        let gap = (target - value).max(1.0);
        let step = step_scale * gap / norm as f64;
        for (k, &u) in unvisited.iter().enumerate() {
            pi[u] += step * (work.degree[k] - 2) as f64;
        }
    }
    best
}

/// Edges that cannot appear in any tour shorter than `ub` (after rounding
/// to granularity `g`), found from the 1-tree at penalties `pi`: forcing a
/// non-tree edge in costs its reduced cost minus the largest tree edge it
/// replaces.
pub(crate) fn eliminated_edges(
    inst: &TspInstance,
    s: usize,
    unvisited: &[usize],
    pi: &[f64],
    ub: u64,
    g: u64,
    work: &mut BoundWork,
) -> Vec<(usize, usize)> {
    let r = unvisited.len();
    if r < 3 {
        return Vec::new();
    }
    let lb = evaluate(inst, s, s, unvisited, pi, work);
    let hopeless = |v: f64| super::round_up(to_integer_bound(v), g) >= ub;
    let rc = |u: usize, v: usize| inst.dist(u, v) as f64 + pi[u] + pi[v];
    let mut adj = vec![Vec::new(); r];
    for k in 1..r {
        let p = work.parent[k];
        let c = rc(unvisited[k], unvisited[p]);
        adj[k].push((p, c));
        adj[p].push((k, c));
    }
    let mut out = Vec::new();

    // sentinel links: the cheapest two are in the 1-tree
    let mut links: Vec<(f64, usize)> = unvisited.iter().map(|&u| (inst.dist(s, u) as f64 + pi[u], u)).collect();
    links.sort_by(|a, b| a.0.total_cmp(&b.0));
    let second = links[1].0;
    for &(c, u) in &links[2..] {
        if hopeless(lb + c - second) {
            out.push((s, u));
        }
    }

    // widest edge on the tree path from each root
    let mut widest = vec![0.0f64; r];
    let mut seen = vec![false; r];
    let mut stack = Vec::new();
    for a in 0..r {
        seen.iter_mut().for_each(|x| *x = false);
        seen[a] = true;
        widest[a] = f64::NEG_INFINITY;
        stack.push(a);
        while let Some(x) = stack.pop() {
            for &(y, c) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    widest[y] = widest[x].max(c);
                    stack.push(y);
                }
            }
        }
        for b in a + 1..r {
            let (u, v) = (unvisited[a], unvisited[b]);
            if work.parent[a] == b || work.parent[b] == a {
                continue;
            }
            if hopeless(lb + rc(u, v) - widest[b]) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Plain spanning-tree bound (all penalties zero).
pub fn path_bound(inst: &TspInstance, s: usize, e: usize, unvisited: &[usize]) -> f64 {
    if unvisited.is_empty() {
        return inst.dist(e, s) as f64;
    }
    let mut work = BoundWork::new(unvisited.len());
    let pi = vec![0.0; inst.size()];
    evaluate(inst, s, e, unvisited, &pi, &mut work)
}

pub(crate) fn to_integer_bound(x: f64) -> u64 {
    if x <= 0.0 {
        0
    } else {
        (x - 1e-6).ceil().max(0.0) as u64
    }
}

/// Lagrangian bound on the optimal tour length. `upper` is any known tour
/// length; it only steers the subgradient step size.
pub fn root_lower_bound(inst: &TspInstance, iterations: usize, upper: u64) -> u64 {
    let n = inst.size();
    if n <= 1 {
        return 0;
    }
    if n == 2 {
        return inst.tour_length(&[0, 1]);
    }
    let s = inst.sentinel();
    let unvisited: Vec<usize> = (0..n).filter(|&v| v != s).collect();
    let mut pi = vec![0.0; n];
    let mut work = BoundWork::new(n);
    let lb = lagrangian_bound(inst, s, s, &unvisited, &mut pi, iterations, upper as f64, &mut work);
    to_integer_bound(lb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsp::solve_brute;
    use crate::tsp::testutil::random_instance;

    #[test]
    fn eliminated_edges_avoid_optimal_tours() {
        for seed in 0..60 {
            let size = 4 + seed as usize % 6;
            let inst = random_instance(size, 9, 300 + seed);
            let opt = solve_brute(&inst).unwrap();
            let s = inst.sentinel();
            let rest: Vec<usize> = (0..size).filter(|&v| v != s).collect();
            let mut pi = vec![0.0; size];
            let mut work = BoundWork::new(size);
            lagrangian_bound(&inst, s, s, &rest, &mut pi, 200, opt.length as f64, &mut work);
            let best = work.best_pi.clone();
            // nothing below opt + 1 exists, so no edge of an optimal tour may go
            let cut = eliminated_edges(&inst, s, &rest, &best, opt.length + 1, 1, &mut work);
            let t = opt.tour.as_slice();
            for w in 0..size {
                let (a, b) = (t[w], t[(w + 1) % size]);
                assert!(!cut.contains(&(a, b)) && !cut.contains(&(b, a)), "seed {seed}: {a}-{b}");
            }
        }
    }

    #[test]
    fn bounds_never_exceed_optimum() {
        for seed in 0..80 {
            let size = 3 + seed as usize % 7;
            let inst = random_instance(size, 25, seed);
            let opt = solve_brute(&inst).unwrap().length;
            let s = inst.sentinel();
            let rest: Vec<usize> = (0..size).filter(|&v| v != s).collect();
            assert!(to_integer_bound(path_bound(&inst, s, s, &rest)) <= opt, "seed {seed}");
            assert!(root_lower_bound(&inst, 100, opt + 10) <= opt, "seed {seed}");
        }
    }
}
