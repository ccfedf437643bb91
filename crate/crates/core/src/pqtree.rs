//! PQ-trees: the admissible leaf orders `Π(T)`, membership, enumeration,
//! and block minimization restricted to `Π(T)`.
//!
//! Text format: P-nodes `( ... )`, Q-nodes `[ ... ]`, leaves are
//! zero-based integers, e.g. `( [0 1 2] (3 4) )`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, ColumnPermutation};
use crate::reduction::{build_plain, TspInstance};
use crate::tsp::SolverConfig;

pub const ENUMERATION_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PQNode {
    Leaf(usize),
    /// Children in any order.
    P(Vec<PQNode>),
    /// Children in the given order or its reverse.
    Q(Vec<PQNode>),
}

impl PQNode {
    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            PQNode::Leaf(x) => out.push(*x),
            PQNode::P(ch) | PQNode::Q(ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    fn max_degree(&self) -> usize {
        match self {
            PQNode::Leaf(_) => 0,
            PQNode::P(ch) | PQNode::Q(ch) => ch
                .iter()
                .map(PQNode::max_degree)
                .max()
                .unwrap_or(0)
                .max(ch.len()),
        }
    }

    fn normalize(self) -> Result<PQNode> {
        match self {
            PQNode::Leaf(x) => Ok(PQNode::Leaf(x)),
            PQNode::P(ch) | PQNode::Q(ch) if ch.len() < 2 => Err(Error::InvalidTree(format!(
                "internal node with {} child(ren)",
                ch.len()
            ))),
            PQNode::P(ch) => Ok(PQNode::P(normalize_all(ch)?)),
            PQNode::Q(ch) if ch.len() == 2 => Ok(PQNode::P(normalize_all(ch)?)),
            PQNode::Q(ch) => Ok(PQNode::Q(normalize_all(ch)?)),
        }
    }
}

fn normalize_all(ch: Vec<PQNode>) -> Result<Vec<PQNode>> {
    ch.into_iter().map(PQNode::normalize).collect()
}

/// A validated PQ-tree. Two-child Q-nodes are stored as P-nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PQTree {
    root: PQNode,
}

impl PQTree {
    pub fn new(root: PQNode) -> Result<Self> {
        let root = root.normalize()?;
        let mut leaves = Vec::new();
        root.collect_leaves(&mut leaves);
        let mut seen = BTreeSet::new();
        for &x in &leaves {
            if !seen.insert(x) {
                return Err(Error::InvalidTree(format!("leaf {x} appears twice")));
            }
        }
        Ok(PQTree { root })
    }

    /// Single P-node over `0..n` (a single leaf when `n == 1`).
    pub fn universal(n: usize) -> Result<Self> {
        match n {
            0 => Err(Error::InvalidTree("a tree needs at least one leaf".into())),
            1 => PQTree::new(PQNode::Leaf(0)),
            _ => PQTree::new(PQNode::P((0..n).map(PQNode::Leaf).collect())),
        }
    }

    pub fn root(&self) -> &PQNode {
        &self.root
    }

    /// Leaf labels in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.root.collect_leaves(&mut out);
        out
    }

    /// Largest child count over internal nodes (0 for a single leaf).
    pub fn max_degree(&self) -> usize {
        self.root.max_degree()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        };
        let root = p.node()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(p.error("trailing input after the tree"));
        }
        PQTree::new(root)
    }

    /// Upper bound on `|Π(T)|` (exact, since leaves are distinct).
    pub fn count(&self) -> u128 {
        fn go(node: &PQNode) -> u128 {
            match node {
                PQNode::Leaf(_) => 1,
                PQNode::P(ch) => ch.iter().enumerate().fold(1u128, |acc, (i, c)| {
                    acc.saturating_mul(go(c)).saturating_mul(i as u128 + 1)
                }),
                PQNode::Q(ch) => ch.iter().fold(2u128, |acc, c| acc.saturating_mul(go(c))),
            }
        }
        go(&self.root)
    }
}

impl fmt::Display for PQNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close, ch) = match self {
            PQNode::Leaf(x) => return write!(f, "{x}"),
            PQNode::P(ch) => ("(", ")", ch),
            PQNode::Q(ch) => ("[", "]", ch),
        };
        f.write_str(open)?;
        for (i, c) in ch.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(close)
    }
}

impl fmt::Display for PQTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        let before = &self.text[..self.pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(self.pos, |k| self.pos - k - 1) + 1;
        Error::parse(format!("pqtree line {line}, column {col}"), msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn node(&mut self) -> Result<PQNode> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') | Some(b'[') => {
                let open = self.bytes[self.pos];
                let close = if open == b'(' { b')' } else { b']' };
                let start = self.pos;
                self.pos += 1;
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.bytes.get(self.pos) {
                        None => {
                            self.pos = start;
                            return Err(self.error("unclosed bracket"));
                        }
                        Some(&c) if c == close => {
                            self.pos += 1;
                            break;
                        }
                        Some(b')') | Some(b']') => return Err(self.error("mismatched bracket")),
                        Some(_) => children.push(self.node()?),
                    }
                }
                if children.len() < 2 {
                    self.pos = start;
                    return Err(self.error("internal node needs at least two children"));
                }
                Ok(if open == b'(' {
                    PQNode::P(children)
                } else {
                    PQNode::Q(children)
                })
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                self.text[start..self.pos].parse().map(PQNode::Leaf).map_err(|_| {
                    self.pos = start;
                    self.error("leaf label out of range")
                })
            }
            Some(_) => Err(self.error("expected '(', '[' or a leaf label")),
        }
    }
}

/// All of `Π(T)`, sorted and without duplicates. Leaves must be `0..n`.
pub fn permutations(t: &PQTree, cap: usize) -> Result<BTreeSet<ColumnPermutation>> {
    check_leaves(t, t.leaves().len())?;
    if t.count() > cap as u128 {
        return Err(Error::EnumerationCap { cap });
    }
    fn go(node: &PQNode) -> Vec<Vec<usize>> {
        match node {
            PQNode::Leaf(x) => vec![vec![*x]],
            PQNode::Q(ch) => {
                let parts: Vec<_> = ch.iter().map(go).collect();
                let mut out = concat_all(&parts, &(0..ch.len()).collect::<Vec<_>>());
                out.extend(concat_all(&parts, &(0..ch.len()).rev().collect::<Vec<_>>()));
                out
            }
            PQNode::P(ch) => {
                let parts: Vec<_> = ch.iter().map(go).collect();
                let mut out = Vec::new();
                let mut order: Vec<usize> = (0..ch.len()).collect();
                for_each_permutation(&mut order, 0, &mut |o| out.extend(concat_all(&parts, o)));
                out
            }
        }
    }
    Ok(go(&t.root)
        .into_iter()
        .map(|v| ColumnPermutation::new(v).expect("leaves are distinct"))
        .collect())
}

fn check_leaves(t: &PQTree, n: usize) -> Result<()> {
    let mut leaves = t.leaves();
    leaves.sort_unstable();
    if leaves.len() != n || leaves.iter().enumerate().any(|(i, &x)| i != x) {
        return Err(Error::InvalidArgument(format!(
            "tree leaves are not exactly 0..{n}"
        )));
    }
    Ok(())
}

/// Concatenations `x_1 ++ ... ++ x_k` with `x_i` drawn from `parts[order[i]]`.
fn concat_all(parts: &[Vec<Vec<usize>>], order: &[usize]) -> Vec<Vec<usize>> {
    let mut acc = vec![Vec::new()];
    for &i in order {
        let mut next = Vec::with_capacity(acc.len() * parts[i].len());
        for prefix in &acc {
            for suffix in &parts[i] {
                let mut v = prefix.clone();
                v.extend_from_slice(suffix);
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

fn for_each_permutation(v: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        for_each_permutation(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Whether `p ∈ Π(T)`, checked bottom-up without enumeration.
pub fn contains(t: &PQTree, p: &ColumnPermutation) -> Result<bool> {
    check_leaves(t, p.len())?;
    let pos = p.positions();

    // Some((lo, hi)) when the subtree occupies positions lo..=hi admissibly.
    fn span(node: &PQNode, pos: &[usize]) -> Option<(usize, usize)> {
        match node {
            PQNode::Leaf(x) => Some((pos[*x], pos[*x])),
            PQNode::P(ch) | PQNode::Q(ch) => {
                let spans: Vec<(usize, usize)> =
                    ch.iter().map(|c| span(c, pos)).collect::<Option<_>>()?;
                let mut sorted: Vec<usize> = (0..spans.len()).collect();
                sorted.sort_by_key(|&i| spans[i].0);
                for w in sorted.windows(2) {
                    if spans[w[1]].0 != spans[w[0]].1 + 1 {
                        return None;
                    }
                }
                if matches!(node, PQNode::Q(_)) {
                    let forward = sorted.iter().enumerate().all(|(k, &i)| k == i);
                    let backward = sorted.iter().rev().enumerate().all(|(k, &i)| k == i);
                    if !forward && !backward {
                        return None;
                    }
                }
                Some((spans[sorted[0]].0, spans[*sorted.last().unwrap()].1))
            }
        }
    }
    Ok(span(&t.root, &pos).is_some())
}

const INF: u64 = u64::MAX / 4;

/// Tree flattened for the dynamic program. A node's leaves are the
/// concatenation of its children's leaves, so child `c` owns the local
/// index range `offsets[c]..offsets[c] + len(c)` of its parent.
struct Flat {
    kind: Kind,
    children: Vec<usize>,
    offsets: Vec<usize>,
    leaves: Vec<usize>,
    /// `table[x * k + y]`: cheapest path over the node's leaves entering at
    /// local leaf `x` and leaving at local leaf `y`.
    table: Vec<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Leaf,
    P,
    Q,
}

struct Dp<'a> {
    inst: &'a TspInstance,
    nodes: Vec<Flat>,
}

impl<'a> Dp<'a> {
    fn flatten(&mut self, node: &PQNode) -> usize {
        let (kind, children) = match node {
            PQNode::Leaf(x) => {
                self.nodes.push(Flat {
                    kind: Kind::Leaf,
                    children: vec![],
                    offsets: vec![],
                    leaves: vec![*x],
                    table: vec![0],
                });
                return self.nodes.len() - 1;
            }
            PQNode::P(ch) => (Kind::P, ch),
            PQNode::Q(ch) => (Kind::Q, ch),
        };
        let ids: Vec<usize> = children.iter().map(|c| self.flatten(c)).collect();
        let mut leaves = Vec::new();
        let mut offsets = Vec::new();
        for &c in &ids {
            offsets.push(leaves.len());
            leaves.extend_from_slice(&self.nodes[c].leaves);
        }
        let mut flat = Flat {
            kind,
            children: ids,
            offsets,
            leaves,
            table: vec![],
        };
        flat.table = match kind {
            Kind::Q => self.q_table(&flat),
            _ => self.p_table(&flat),
        };
        self.nodes.push(flat);
        self.nodes.len() - 1
    }

    fn d(&self, a: usize, b: usize) -> u64 {
        self.inst.dist(a, b) as u64
    }

    /// Chains children `0..k` in order; `steps[i]` holds, for every entry in
    /// child 0 and exit in child `i`, the cheapest path through children
    /// `0..=i`. Indices are local to the node.
    fn chain(&self, v: &Flat) -> Vec<Vec<u64>> {
        let k = v.leaves.len();
        let first = &self.nodes[v.children[0]];
        let mut cur = vec![INF; k * k];
        let n0 = first.leaves.len();
        for x in 0..n0 {
            for y in 0..n0 {
                cur[x * k + y] = first.table[x * n0 + y];
            }
        }
        let mut steps = vec![cur.clone()];
        for i in 1..v.children.len() {
            let prev_lo = v.offsets[i - 1];
            let prev_hi = v.offsets[i];
            let child = &self.nodes[v.children[i]];
            let lo = v.offsets[i];
            let nc = child.leaves.len();
            let mut next = vec![INF; k * k];
            for x in 0..n0 {
                // h[x'] = min_y cur[x][y] + d(y, x')
                let mut h = vec![INF; nc];
                for y in prev_lo..prev_hi {
                    let base = cur[x * k + y];
                    if base >= INF {
                        continue;
                    }
                    for (xi, hx) in h.iter_mut().enumerate() {
                        let c = base + self.d(v.leaves[y], child.leaves[xi]);
                        if c < *hx {
                            *hx = c;
                        }
                    }
                }
                for yi in 0..nc {
                    let best = (0..nc)
                        .map(|xi| h[xi].saturating_add(child.table[xi * nc + yi]))
                        .min()
                        .unwrap();
                    next[x * k + lo + yi] = best;
                }
            }
            steps.push(next.clone());
            cur = next;
        }
        steps
    }

    fn q_table(&self, v: &Flat) -> Vec<u64> {
        let k = v.leaves.len();
        let forward = self.chain(v).pop().unwrap();
        // the reversed chain is the forward chain walked backwards
        let mut table = vec![INF; k * k];
        for x in 0..k {
            for y in 0..k {
                table[x * k + y] = forward[x * k + y].min(forward[y * k + x]);
            }
        }
        table
    }

    /// Subset DP for entry `x` (local) over children sets containing the
    /// child of `x`. Returns `e[mask * k + y]`.
    fn p_subsets(&self, v: &Flat, x: usize) -> Vec<u64> {
        let k = v.leaves.len();
        let nch = v.children.len();
        let owner = self.owner(v, x);
        let mut e = vec![INF; (1usize << nch) * k];
        let c0 = &self.nodes[v.children[owner]];
        let n0 = c0.leaves.len();
        let lo0 = v.offsets[owner];
        for y in 0..n0 {
            e[(1 << owner) * k + lo0 + y] = c0.table[(x - lo0) * n0 + y];
        }
        for mask in 0..(1usize << nch) {
            if mask >> owner & 1 == 0 {
                continue;
            }
            let ends: Vec<(usize, u64)> = (0..k)
                .filter_map(|y| {
                    let c = e[mask * k + y];
                    (c < INF).then_some((y, c))
                })
                .collect();
            if ends.is_empty() {
                continue;
            }
            for c in 0..nch {
                if mask >> c & 1 == 1 {
                    continue;
                }
                let child = &self.nodes[v.children[c]];
                let nc = child.leaves.len();
                let lo = v.offsets[c];
                let mut h = vec![INF; nc];
                for &(y, cost) in &ends {
                    for (xi, hx) in h.iter_mut().enumerate() {
                        let t = cost + self.d(v.leaves[y], child.leaves[xi]);
                        if t < *hx {
                            *hx = t;
                        }
                    }
                }
                let to = (mask | 1 << c) * k;
                for yi in 0..nc {
                    let best = (0..nc)
                        .map(|xi| h[xi].saturating_add(child.table[xi * nc + yi]))
                        .min()
                        .unwrap();
                    if best < e[to + lo + yi] {
                        e[to + lo + yi] = best;
                    }
                }
            }
        }
        e
    }

    fn p_table(&self, v: &Flat) -> Vec<u64> {
        let k = v.leaves.len();
        let full = (1usize << v.children.len()) - 1;
        let mut table = vec![INF; k * k];
        for x in 0..k {
            let e = self.p_subsets(v, x);
            table[x * k..(x + 1) * k].copy_from_slice(&e[full * k..(full + 1) * k]);
        }
        table
    }

    fn owner(&self, v: &Flat, local: usize) -> usize {
        v.offsets.partition_point(|&o| o <= local) - 1
    }

    /// Leaf sequence realizing `table[x][y]` of node `id`.
    fn trace(&self, id: usize, x: usize, y: usize, out: &mut Vec<usize>) {
        let v = &self.nodes[id];
        let k = v.leaves.len();
        match v.kind {
            Kind::Leaf => out.push(v.leaves[0]),
            Kind::Q => {
                let forward = self.chain(v);
                let last = forward.last().unwrap();
                if last[x * k + y] <= last[y * k + x] {
                    self.trace_chain(v, &forward, x, y, out);
                } else {
                    let mut rev = Vec::new();
                    self.trace_chain(v, &forward, y, x, &mut rev);
                    rev.reverse();
                    out.extend(rev);
                }
            }
            Kind::P => self.trace_p(v, x, y, out),
        }
    }

    /// Finds the cheapest `(y_prev, x_next)` handover into child `c` so
    /// that `prev[y_prev] + d + child[x_next][y] == target`; smallest
    /// indices first.
    fn handover(
        &self,
        v: &Flat,
        prev: impl Fn(usize) -> u64,
        prev_range: std::ops::Range<usize>,
        c: usize,
        y: usize,
        target: u64,
    ) -> (usize, usize) {
        let child = &self.nodes[v.children[c]];
        let nc = child.leaves.len();
        let lo = v.offsets[c];
        for yp in prev_range {
            let base = prev(yp);
            if base >= INF {
                continue;
            }
            for xi in 0..nc {
                let t = base
                    + self.d(v.leaves[yp], child.leaves[xi])
                    + child.table[xi * nc + (y - lo)];
                if t == target {
                    return (yp, lo + xi);
                }
            }
        }
        unreachable!("dynamic program table is inconsistent")
    }

    fn trace_chain(&self, v: &Flat, steps: &[Vec<u64>], x: usize, y: usize, out: &mut Vec<usize>) {
        let k = v.leaves.len();
        // (child, entry, exit) from last to first
        let mut pieces = Vec::new();
        let mut y = y;
        for i in (1..v.children.len()).rev() {
            let target = steps[i][x * k + y];
            let prev = &steps[i - 1];
            let (yp, xi) = self.handover(
                v,
                |yp| prev[x * k + yp],
                v.offsets[i - 1]..v.offsets[i],
                i,
                y,
                target,
            );
            pieces.push((i, xi, y));
            y = yp;
        }
        pieces.push((0, x, y));
        for &(i, a, b) in pieces.iter().rev() {
            self.trace_child(v, i, a, b, out);
        }
    }

    fn trace_p(&self, v: &Flat, x: usize, y: usize, out: &mut Vec<usize>) {
        let k = v.leaves.len();
        let e = self.p_subsets(v, x);
        let owner = self.owner(v, x);
        let mut mask = (1usize << v.children.len()) - 1;
        let mut y = y;
        let mut pieces = Vec::new();
        loop {
            let c = self.owner(v, y);
            if mask == 1 << owner {
                pieces.push((owner, x, y));
                break;
            }
            let rest = mask & !(1 << c);
            let target = e[mask * k + y];
            let (yp, xi) = self.handover(v, |yp| e[rest * k + yp], 0..k, c, y, target);
            pieces.push((c, xi, y));
            mask = rest;
            y = yp;
        }
        for &(c, a, b) in pieces.iter().rev() {
            self.trace_child(v, c, a, b, out);
        }
    }

    fn trace_child(&self, v: &Flat, c: usize, a: usize, b: usize, out: &mut Vec<usize>) {
        let lo = v.offsets[c];
        self.trace(v.children[c], a - lo, b - lo, out);
    }
}

/// Column order in `Π(T)` with the fewest blocks, and that block count.
///
/// The tree is wrapped as a two-child P-node together with the sentinel
/// column of the tour reduction; a per-node table of cheapest
/// entry-to-exit leaf paths is built bottom-up (Q-nodes chain their
/// children in order or reverse, P-nodes run a subset DP over children),
/// the cheapest closed tour is traced back and cut at the sentinel.
/// Duplicate columns are not collapsed.
pub fn constrained_min_cons1(
    a: &BinaryMatrix,
    t: &PQTree,
    cfg: &SolverConfig,
) -> Result<(ColumnPermutation, u64)> {
    let n = a.cols();
    check_leaves(t, n)?;
    let degree = t.max_degree();
    if degree > cfg.pq_degree_cap {
        return Err(Error::DegreeCap {
            degree,
            cap: cfg.pq_degree_cap,
        });
    }
    let inst = build_plain(a);
    let wrapped = PQNode::P(vec![PQNode::Leaf(n), t.root.clone()]);
    let mut dp = Dp {
        inst: &inst,
        nodes: Vec::new(),
    };
    let root = dp.flatten(&wrapped);
    let r = &dp.nodes[root];
    let k = r.leaves.len();
    let mut best = (INF, 0, 0);
    for x in 0..k {
        for y in 0..k {
            let c = r.table[x * k + y].saturating_add(dp.d(r.leaves[y], r.leaves[x]));
            if c < best.0 {
                best = (c, x, y);
            }
        }
    }
    let (length, x, y) = best;
    let mut seq = Vec::with_capacity(k);
    dp.trace(root, x, y, &mut seq);
    let cut = seq.iter().position(|&v| v == n).expect("sentinel is a leaf");
    seq.rotate_left(cut);
    seq.remove(0);
    debug_assert_eq!(a.cons1_under(&seq) as u64 * 2, length);
    Ok((ColumnPermutation::new(seq)?, length / 2))
}
