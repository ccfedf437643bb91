//! Instance generators: random matrices, synthetic benchmark corpora,
//! random PQ-trees and the Hamiltonian-path incidence gadget.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;
use crate::pqtree::{PQNode, PQTree};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every entry independently 1 with probability `density`.
pub fn random_matrix(rows: usize, cols: usize, density: f64, seed: u64) -> Result<BinaryMatrix> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(format!(
            "density {density} outside [0, 1]"
        )));
    }
    let mut rng = rng(seed);
    Ok(BinaryMatrix::from_fn(rows, cols, |_, _| rng.gen_bool(density)))
}

/// Stand-in for the small hand-made benchmark family: 5 to 50 sets over
/// `cols` pairwise distinct, non-empty overlaps.
pub fn t1_like(cols: usize, seed: u64) -> BinaryMatrix {
    let mut rng = rng(seed);
    // enough rows that `cols` distinct non-empty columns exist
    let min_rows = (usize::BITS - cols.leading_zeros()) as usize + 1;
    let rows = rng.gen_range(min_rows.max(5)..=50.max(min_rows));
    let density = rng.gen_range(0.15..0.35);
    let mut seen = BTreeSet::new();
    let mut columns = Vec::with_capacity(cols);
    while columns.len() < cols {
        let col: Vec<bool> = (0..rows).map(|_| rng.gen_bool(density)).collect();
        if col.iter().any(|&b| b) && seen.insert(col.clone()) {
            columns.push(col);
        }
    }
    BinaryMatrix::from_fn(rows, cols, |i, j| columns[j][i])
}

/// Stand-in for the recipe-derived family: few, sparse sets over many
/// elements, most of which belong to one or two sets, so columns repeat
/// heavily.
pub fn t2_like(rows: usize, cols: usize, seed: u64) -> BinaryMatrix {
    let mut rng = rng(seed);
    // skewed set popularity
    let popularity: Vec<f64> = (0..rows).map(|i| 1.0 / (1.0 + i as f64).sqrt()).collect();
    let total: f64 = popularity.iter().sum();
    let pick = |rng: &mut ChaCha8Rng| {
        let mut x = rng.gen::<f64>() * total;
        for (i, p) in popularity.iter().enumerate() {
            if x < *p {
                return i;
            }
            x -= p;
        }
        rows - 1
    };
    let mut columns: Vec<BTreeSet<usize>> = Vec::with_capacity(cols);
    for _ in 0..cols {
        let mut k = 1;
        while k < rows && rng.gen_bool(0.3) {
            k += 1;
        }
        let mut set = BTreeSet::new();
        while set.len() < k {
            set.insert(pick(&mut rng));
        }
        columns.push(set);
    }
    let mut perm: Vec<usize> = (0..rows).collect();
    perm.shuffle(&mut rng);
    BinaryMatrix::from_fn(rows, cols, |i, j| columns[j].contains(&perm[i]))
}

/// Random PQ-tree over leaves `0..leaves` whose internal nodes have between
/// 2 and `max_degree` children.
pub fn random_pqtree(leaves: usize, max_degree: usize, seed: u64) -> Result<PQTree> {
    if leaves == 0 || max_degree < 2 {
        return Err(Error::InvalidArgument(
            "need at least one leaf and max degree >= 2".into(),
        ));
    }
    let mut rng = rng(seed);
    let mut labels: Vec<usize> = (0..leaves).collect();
    labels.shuffle(&mut rng);
    let root = build_random_node(&labels, max_degree, &mut rng);
    PQTree::new(root)
}

fn build_random_node(labels: &[usize], max_degree: usize, rng: &mut ChaCha8Rng) -> PQNode {
    if labels.len() == 1 {
        return PQNode::Leaf(labels[0]);
    }
    let k = rng.gen_range(2..=max_degree.min(labels.len()));
    // split into k non-empty consecutive chunks
    let mut cuts: Vec<usize> = (1..labels.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut children = Vec::with_capacity(k);
    let mut lo = 0;
    for hi in cuts.into_iter().chain([labels.len()]) {
        children.push(build_random_node(&labels[lo..hi], max_degree, rng));
        lo = hi;
    }
    if k >= 3 && rng.gen_bool(0.5) {
        PQNode::Q(children)
    } else {
        PQNode::P(children)
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl SimpleGraph {
    /// Edges are normalized to `(min, max)`; self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) leaves the vertex range 0..{n}"
                )));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(SimpleGraph { n, edges: set })
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }
}

/// Incidence matrix of a graph (one row per edge, one column per vertex)
/// together with the block threshold `2m - (n - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetInstance {
    pub matrix: BinaryMatrix,
    pub threshold: i64,
}

/// The graph has a Hamiltonian path iff some column order of the incidence
/// matrix has at most `threshold` blocks.
pub fn hampath_gadget(g: &SimpleGraph) -> Result<GadgetInstance> {
    if g.vertices() < 2 {
        return Err(Error::InvalidGraph("gadget needs at least two vertices".into()));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let matrix = BinaryMatrix::from_fn(edges.len(), g.vertices(), |e, v| {
        edges[e].0 == v || edges[e].1 == v
    });
    let threshold = 2 * edges.len() as i64 - (g.vertices() as i64 - 1);
    Ok(GadgetInstance { matrix, threshold })
}

/// Exhaustive search for a path visiting every vertex once.
pub fn has_hamiltonian_path(g: &SimpleGraph) -> bool {
    let n = g.vertices();
    if n <= 1 {
        return true;
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).filter(|&v| g.has_edge(u, v)).collect())
        .collect();
    fn walk(adj: &[Vec<usize>], v: usize, used: &mut [bool], count: usize) -> bool {
        if count == used.len() {
            return true;
        }
        for &w in &adj[v] {
            if !used[w] {
                used[w] = true;
                if walk(adj, w, used, count + 1) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    (0..n).any(|s| {
        let mut used = vec![false; n];
        used[s] = true;
        walk(&adj, s, &mut used, 1)
    })
}

const ENUMERATION_VERTEX_CAP: usize = 7;

/// All labeled simple graphs on `n <= 7` vertices with maximum degree at
/// most `max_degree`, in increasing edge-mask order.
pub fn enumerate_small_graphs(n: usize, max_degree: usize) -> Result<Vec<SimpleGraph>> {
    if n > ENUMERATION_VERTEX_CAP {
        return Err(Error::InvalidArgument(format!(
            "graph enumeration supports at most {ENUMERATION_VERTEX_CAP} vertices"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    'mask: for mask in 0u64..(1u64 << pairs.len()) {
        let mut degree = [0usize; ENUMERATION_VERTEX_CAP];
        for (k, &(u, v)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                degree[u] += 1;
                degree[v] += 1;
                if degree[u] > max_degree || degree[v] > max_degree {
                    continue 'mask;
                }
            }
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e);
        out.push(SimpleGraph::new(n, edges).expect("enumerated edges are simple"));
    }
    Ok(out)
}

/// Seeded sample (without replacement) of [`enumerate_small_graphs`],
/// or all of them when there are at most `cap`.
pub fn sample_small_graphs(
    n: usize,
    max_degree: usize,
    cap: usize,
    seed: u64,
) -> Result<Vec<SimpleGraph>> {
    let mut all = enumerate_small_graphs(n, max_degree)?;
    if all.len() > cap {
        let mut rng = rng(seed);
        all.shuffle(&mut rng);
        all.truncate(cap);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_extremes() {
        let zero = random_matrix(4, 6, 0.0, 1).unwrap();
        assert_eq!(zero.ones(), 0);
        let full = random_matrix(4, 6, 1.0, 1).unwrap();
        assert_eq!(full.cons1(), 4);
        assert!(random_matrix(1, 1, 1.5, 0).is_err());
    }

    #[test]
    fn seeded_matrices_repeat() {
        assert_eq!(
            random_matrix(7, 9, 0.4, 42).unwrap(),
            random_matrix(7, 9, 0.4, 42).unwrap()
        );
        assert_eq!(t1_like(30, 3), t1_like(30, 3));
        assert_eq!(t2_like(20, 160, 3), t2_like(20, 160, 3));
    }

    #[test]
    fn t1_columns_distinct_nonempty() {
        for seed in 0..5 {
            let a = t1_like(70, seed);
            assert_eq!(a.cols(), 70);
            let (c, _) = crate::matrix::collapse_duplicates(&a);
            assert_eq!(c.cols(), 70);
            assert!((0..70).all(|j| a.column_ones(j) > 0));
        }
    }

    #[test]
    fn path_gadget() {
        let g = SimpleGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let gadget = hampath_gadget(&g).unwrap();
        assert_eq!(gadget.matrix.to_rows(), vec![vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(gadget.threshold, 2);
    }

    #[test]
    fn gadget_row_and_column_counts() {
        let g = SimpleGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap();
        let gadget = hampath_gadget(&g).unwrap();
        for i in 0..gadget.matrix.rows() {
            assert_eq!(gadget.matrix.row_ones(i), 2);
        }
        for v in 0..4 {
            assert_eq!(gadget.matrix.column_ones(v), g.degree(v));
        }
        assert!(hampath_gadget(&SimpleGraph::new(1, []).unwrap()).is_err());
    }

    #[test]
    fn graph_validation() {
        assert!(SimpleGraph::new(3, [(1, 1)]).is_err());
        assert!(SimpleGraph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(SimpleGraph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn hamiltonian_oracle() {
        let star = SimpleGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!has_hamiltonian_path(&star));
        let c4 = SimpleGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(has_hamiltonian_path(&c4));
    }

    #[test]
    fn two_vertex_enumeration() {
        let graphs = enumerate_small_graphs(2, 3).unwrap();
        assert_eq!(graphs.len(), 2);
        assert!(enumerate_small_graphs(8, 3).is_err());
    }

    #[test]
    fn enumerated_graphs_respect_degree() {
        for g in enumerate_small_graphs(5, 3).unwrap() {
            assert!(g.max_degree() <= 3);
        }
        assert_eq!(sample_small_graphs(7, 3, 200, 1).unwrap().len(), 200);
    }

    #[test]
    fn random_trees_are_valid() {
        for seed in 0..50 {
            let t = random_pqtree(8, 4, seed).unwrap();
            assert!(t.max_degree() <= 4);
            assert_eq!(t.leaves().len(), 8);
        }
    }
}
