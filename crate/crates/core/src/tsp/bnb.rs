use std::time::{Duration, Instant};

use super::bound::{eliminated_edges, lagrangian_bound, to_integer_bound, BoundWork};
use super::{round_up, solve_heuristic, BoundKind, SolveResult, SolveStats, SolverConfig, Tour};
use crate::reduction::TspInstance;

const ROOT_ITERATIONS: usize = 400;
const NODE_ITERATIONS: usize = 30;
const EPS: f64 = 1e-7;

/// Branch and bound over 1-trees.
///
/// A 1-tree is a spanning tree on all vertices but the sentinel plus the
/// sentinel's two cheapest links; every tour is one, so its cost under
/// Lagrangian vertex penalties bounds the optimum. The root ascent runs
/// long and then drops every edge whose reduced cost proves it useless.
/// Each node picks a vertex of degree above 2 in its 1-tree and branches
/// on two of its free tree edges (exclude the first; include it and exclude
/// the second; include both). Fixings propagate: saturated vertices lose
/// their other edges, vertices down to two edges keep both, and paths of
/// included edges may not close early. The incumbent starts from
/// [`solve_heuristic`] (with extra kicks); when the time limit hits, it is
/// returned unproven together with the root lower bound.
pub fn solve_branch_and_bound(inst: &TspInstance, cfg: &SolverConfig) -> SolveResult {
    let start = Instant::now();
    let n = inst.size();
    let warm_cfg = SolverConfig {
        kicks: cfg.kicks.max(4 * n),
        ..cfg.clone()
    };
    let warm = solve_heuristic(inst, &warm_cfg);
    let g = inst.granularity();
    let s = inst.sentinel();

    let result = |tour: Tour, length: u64, optimal: bool, nodes: u64, lb: u64| SolveResult {
        tour,
        length,
        optimal,
        stats: SolveStats {
            nodes,
            elapsed: start.elapsed(),
            lower_bound: lb,
            algorithm: "branch_and_bound",
        },
    };
    if n <= 3 {
        return result(warm.tour, warm.length, true, 1, warm.length);
    }

    let mut pi = vec![0.0; n];
    let mut work = BoundWork::new(n);
    let others: Vec<usize> = (0..n).filter(|&v| v != s).collect();
    let iters = match cfg.bound {
        BoundKind::Mst => 1,
        BoundKind::Lagrangian => ROOT_ITERATIONS,
    };
    let target = warm.length.saturating_sub(g) as f64;
    let lb = lagrangian_bound(inst, s, s, &others, &mut pi, iters, target, &mut work);
    let root_lb = round_up(to_integer_bound(lb), g).min(warm.length);
    if start.elapsed() >= cfg.time_limit {
        return result(warm.tour, warm.length, false, 0, root_lb);
    }
    if root_lb >= warm.length {
        return result(warm.tour, warm.length, true, 1, warm.length);
    }

    let mut root = Fixing::new(n);
    match cfg.bound {
        BoundKind::Mst => pi.iter_mut().for_each(|p| *p = 0.0),
        BoundKind::Lagrangian => {
            pi.copy_from_slice(&work.best_pi);
            for (u, v) in eliminated_edges(inst, s, &others, &pi, warm.length, g, &mut work) {
                if !root.exclude(u, v) {
                    // no tour beats the incumbent
                    return result(warm.tour, warm.length, true, 1, warm.length);
                }
            }
        }
    }

    let mut search = Search {
        inst,
        s,
        g,
        iterations: match cfg.bound {
            BoundKind::Mst => 1,
            BoundKind::Lagrangian => NODE_ITERATIONS,
        },
        ub: warm.length,
        best: warm.tour.as_slice().to_vec(),
        tree: OneTree::new(n),
        nodes: 0,
        start,
        limit: cfg.time_limit,
        timed_out: false,
    };
    search.run(root, pi);

    let length = search.ub;
    let tour = Tour::from_vec_unchecked(search.best).rotated_to(s);
    if search.timed_out {
        result(tour, length, false, search.nodes, root_lb.min(length))
    } else {
        result(tour, length, true, search.nodes, length)
    }
}

const FREE: i8 = 0;
const IN: i8 = 1;
const OUT: i8 = -1;

/// Edge fixings of a search node.
#[derive(Clone)]
struct Fixing {
    n: usize,
    state: Vec<i8>,
    included: Vec<u32>,
    available: Vec<u32>,
}

impl Fixing {
    fn new(n: usize) -> Self {
        let mut state = vec![FREE; n * n];
        for v in 0..n {
            state[v * n + v] = OUT;
        }
        Fixing {
            n,
            state,
            included: vec![0; n],
            available: vec![n as u32 - 1; n],
        }
    }

    fn get(&self, u: usize, v: usize) -> i8 {
        self.state[u * self.n + v]
    }

    fn set(&mut self, u: usize, v: usize, x: i8) {
        self.state[u * self.n + v] = x;
        self.state[v * self.n + u] = x;
    }

    /// False when the fixing becomes infeasible.
    fn exclude(&mut self, u: usize, v: usize) -> bool {
        match self.get(u, v) {
            OUT => return true,
            IN => return false,
            _ => {}
        }
        self.set(u, v, OUT);
        self.available[u] -= 1;
        self.available[v] -= 1;
        self.settle(u) && self.settle(v)
    }

    fn include(&mut self, u: usize, v: usize) -> bool {
        match self.get(u, v) {
            IN => return true,
            OUT => return false,
            _ => {}
        }
        self.set(u, v, IN);
        self.included[u] += 1;
        self.included[v] += 1;
        if self.included[u] > 2 || self.included[v] > 2 {
            return false;
        }
        // the path through u-v may only close once it spans everything
        let (a, la) = self.path_end(u, v);
        let (b, lb) = self.path_end(v, u);
        if la + lb > 2 && la + lb < self.n && !self.exclude(a, b) {
            return false;
        }
        self.settle(u) && self.settle(v)
    }

    /// Far end of the included path leaving `from` away from `prev`, and
    /// the number of vertices on that side.
    fn path_end(&self, from: usize, prev: usize) -> (usize, usize) {
        let (mut prev, mut cur, mut count) = (prev, from, 1);
        loop {
            let next = (0..self.n).find(|&w| w != prev && self.get(cur, w) == IN);
            match next {
                Some(w) if w != from => {
                    prev = cur;
                    cur = w;
                    count += 1;
                }
                _ => return (cur, count),
            }
        }
    }

    fn settle(&mut self, x: usize) -> bool {
        if self.available[x] < 2 {
            return false;
        }
        if self.included[x] == 2 && self.available[x] > 2 {
            for w in 0..self.n {
                if self.get(x, w) == FREE && !self.exclude(x, w) {
                    return false;
                }
            }
        } else if self.available[x] == 2 && self.included[x] < 2 {
            for w in 0..self.n {
                if self.get(x, w) == FREE && !self.include(x, w) {
                    return false;
                }
            }
        }
        true
    }
}

/// Minimum 1-tree under penalties and fixings.
struct OneTree {
    key: Vec<f64>,
    parent: Vec<usize>,
    in_tree: Vec<bool>,
    degree: Vec<i32>,
    /// Tree edges, then the two sentinel links.
    edges: Vec<(usize, usize)>,
}

impl OneTree {
    fn new(n: usize) -> Self {
        OneTree {
            key: vec![0.0; n],
            parent: vec![0; n],
            in_tree: vec![false; n],
            degree: vec![0; n],
            edges: Vec::with_capacity(n),
        }
    }

    /// Lagrangian value, or `None` when the fixings admit no 1-tree.
    fn evaluate(&mut self, inst: &TspInstance, s: usize, fx: &Fixing, pi: &[f64]) -> Option<f64> {
        // included edges sort before everything else
        const FORCE: f64 = 1e12;
        let n = inst.size();
        let rc = |u: usize, v: usize| inst.dist(u, v) as f64 + pi[u] + pi[v];
        self.edges.clear();
        for v in 0..n {
            self.key[v] = f64::INFINITY;
            self.in_tree[v] = v == s;
            self.degree[v] = 0;
        }
        let root = if s == 0 { 1 } else { 0 };
        self.key[root] = 0.0;
        self.parent[root] = usize::MAX;
        let mut total = 0.0;
        for _ in 1..n {
            let mut pick = usize::MAX;
            let mut best = f64::INFINITY;
            for v in 0..n {
                if !self.in_tree[v] && self.key[v] < best {
                    best = self.key[v];
                    pick = v;
                }
            }
            if pick == usize::MAX {
                return None;
            }
            self.in_tree[pick] = true;
            let p = self.parent[pick];
            if p != usize::MAX {
                total += rc(p, pick);
                self.degree[p] += 1;
                self.degree[pick] += 1;
                self.edges.push((p, pick));
            }
            for v in 0..n {
                if !self.in_tree[v] {
                    let c = match fx.get(pick, v) {
                        OUT => continue,
                        IN => rc(pick, v) - FORCE,
                        _ => rc(pick, v),
                    };
                    if c < self.key[v] {
                        self.key[v] = c;
                        self.parent[v] = pick;
                    }
                }
            }
        }

        let mut links: [(f64, usize); 2] = [(f64::INFINITY, usize::MAX); 2];
        for v in 0..n {
            let c = match fx.get(s, v) {
                OUT => continue,
                IN => rc(s, v) - FORCE,
                _ => rc(s, v),
            };
            if c < links[0].0 {
                links[1] = links[0];
                links[0] = (c, v);
            } else if c < links[1].0 {
                links[1] = (c, v);
            }
        }
        for (_, v) in links {
            if v == usize::MAX {
                return None;
            }
            total += rc(s, v);
            self.degree[s] += 1;
            self.degree[v] += 1;
            self.edges.push((s, v));
        }
        Some(total - 2.0 * pi.iter().sum::<f64>())
    }
}

struct Search<'a> {
    inst: &'a TspInstance,
    s: usize,
    g: u64,
    iterations: usize,
    ub: u64,
    best: Vec<usize>,
    tree: OneTree,
    nodes: u64,
    start: Instant,
    limit: Duration,
    timed_out: bool,
}

impl Search<'_> {
    fn pruned(&self, value: f64) -> bool {
        round_up(to_integer_bound(value), self.g) >= self.ub
    }

    /// Subgradient ascent at a node, leaving the best penalties in `pi`;
    /// false when the node can be discarded.
    fn ascend(&mut self, fx: &Fixing, pi: &mut [f64]) -> bool {
        let inst = self.inst;
        let s = self.s;
        let target = self.ub.saturating_sub(self.g) as f64;
        let mut best = f64::NEG_INFINITY;
        let mut best_pi = pi.to_vec();
        let mut step_scale = 1.0;
        let mut stall = 0;
        for it in 0..self.iterations {
            let Some(value) = self.tree.evaluate(inst, s, fx, pi) else {
                return false;
            };
            if self.pruned(value) {
                return false;
            }
            let tour = self.tree.degree.iter().all(|&d| d == 2);
            if tour {
                // a tour whose length equals the bound: best in this subtree
                self.offer_tree();
                return false;
            }
            if value > best + EPS {
                best = value;
                best_pi.copy_from_slice(pi);
                stall = 0;
            } else {
                stall += 1;
                if stall >= 3 {
                    step_scale *= 0.5;
                    stall = 0;
                }
            }
            if it + 1 == self.iterations {
                break;
            }
            let norm: i64 = self.tree.degree.iter().map(|&d| ((d - 2) * (d - 2)) as i64).sum();
            let step = step_scale * (target - value).max(1.0) / norm as f64;
            for (v, p) in pi.iter_mut().enumerate() {
                if v != s {
                    *p += step * (self.tree.degree[v] - 2) as f64;
                }
            }
        }
        pi.copy_from_slice(&best_pi);
        true
    }

    fn offer_tree(&mut self) {
        let n = self.inst.size();
        let mut adj = vec![Vec::with_capacity(2); n];
        for &(u, v) in &self.tree.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut order = vec![self.s];
        let (mut prev, mut cur) = (self.s, adj[self.s][0]);
        while cur != self.s {
            order.push(cur);
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
        }
        if order.len() == n {
            let len = self.inst.tour_length(&order);
            if len < self.ub {
                self.ub = len;
                self.best = order;
            }
        }
    }

    fn run(&mut self, root: Fixing, pi: Vec<f64>) {
        let mut stack = vec![(root, pi)];
        while let Some((fx, mut pi)) = stack.pop() {
            self.nodes += 1;
            if self.start.elapsed() >= self.limit {
                self.timed_out = true;
                return;
            }
            if !self.ascend(&fx, &mut pi) {
                continue;
            }
            // the tree at the best penalties decides the branching
            if self.tree.evaluate(self.inst, self.s, &fx, &pi).is_none() {
                continue;
            }
            let degree = &self.tree.degree;
            let Some(v) = (0..self.inst.size()).filter(|&v| degree[v] > 2).max_by_key(|&v| degree[v]) else {
                continue;
            };
            let mut free: Vec<usize> = self
                .tree
                .edges
                .iter()
                .filter_map(|&(a, b)| match (a == v, b == v) {
                    (true, _) => Some(b),
                    (_, true) => Some(a),
                    _ => None,
                })
                .filter(|&w| fx.get(v, w) == FREE)
                .collect();
            // cheapest edges are the likeliest to stay
            free.sort_by_key(|&w| (self.inst.dist(v, w), w));
            let mut children = Vec::with_capacity(3);
            if free.is_empty() {
                continue;
            }
            let e1 = free[free.len() - 1];
            let mut a = fx.clone();
            if a.exclude(v, e1) {
                children.push(a);
            }
            let mut b = fx.clone();
            let b_ok = b.include(v, e1);
            if fx.included[v] == 0 && free.len() >= 2 {
                let e2 = free[free.len() - 2];
                let mut c = b.clone();
                if b_ok && b.exclude(v, e2) {
                    children.push(b);
                }
                if b_ok && c.include(v, e2) {
                    children.push(c);
                }
            } else if b_ok {
                children.push(b);
            }
            // the last pushed child is explored first
            for child in children {
                stack.push((child, pi.clone()));
            }
        }
    }
}
