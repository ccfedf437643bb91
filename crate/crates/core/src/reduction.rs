//! Reductions from column ordering to the symmetric TSP.
//!
//! A zero column (the sentinel) is appended to the matrix and every column
//! becomes a vertex. Under Hamming distances a tour's length is twice the
//! block count of the column order read off the tour starting after the
//! sentinel. Group penalties and row weights change only the distances.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, ColumnPermutation};
use crate::tsp::Tour;

/// Complete graph with a symmetric integer distance matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TspInstance {
    size: usize,
    dist: Vec<u32>,
    sentinel: usize,
    granularity: u64,
}

impl TspInstance {
    /// Validates symmetry and the zero diagonal. `dist` is row-major.
    pub fn new(size: usize, dist: Vec<u32>, sentinel: usize) -> Result<Self> {
        if dist.len() != size * size {
            return Err(Error::LengthMismatch {
                what: "distance matrix",
                expected: size * size,
                found: dist.len(),
            });
        }
        if sentinel >= size {
            return Err(Error::IndexOutOfRange {
                what: "sentinel",
                index: sentinel,
                len: size,
            });
        }
        for i in 0..size {
            if dist[i * size + i] != 0 {
                return Err(Error::InvalidArgument(format!(
                    "distance matrix has nonzero diagonal at {i}"
                )));
            }
            for j in 0..i {
                if dist[i * size + j] != dist[j * size + i] {
                    return Err(Error::InvalidArgument(format!(
                        "distance matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(TspInstance {
            size,
            dist,
            sentinel,
            granularity: 1,
        })
    }

    pub fn from_fn(size: usize, sentinel: usize, mut f: impl FnMut(usize, usize) -> u32) -> Result<Self> {
        let mut dist = vec![0; size * size];
        for i in 0..size {
            for j in 0..i {
                let d = f(i, j);
                dist[i * size + j] = d;
                dist[j * size + i] = d;
            }
        }
        TspInstance::new(size, dist, sentinel)
    }

    /// Declares that every tour length is a multiple of `granularity`.
    /// Exact solvers round lower bounds up to this step when pruning.
    pub fn with_granularity(mut self, granularity: u64) -> Self {
        self.granularity = granularity.max(1);
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn sentinel(&self) -> usize {
        self.sentinel
    }

    pub fn granularity(&self) -> u64 {
        self.granularity
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.dist[i * self.size..(i + 1) * self.size]
    }

    pub fn max_dist(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// Cyclic length of a vertex sequence, closing edge included.
    pub fn tour_length(&self, order: &[usize]) -> u64 {
        if order.len() < 2 {
            return 0;
        }
        let open: u64 = order
            .windows(2)
            .map(|w| self.dist(w[0], w[1]) as u64)
            .sum();
        open + self.dist(order[order.len() - 1], order[0]) as u64
    }
}

/// Column groups that must each appear consecutively, with the penalty
/// `2p + 1` where `p` is the number of 1-entries of the matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnGroups {
    groups: Vec<BTreeSet<usize>>,
    penalty: u32,
}

impl ColumnGroups {
    pub fn new(a: &BinaryMatrix, groups: Vec<BTreeSet<usize>>) -> Result<Self> {
        for (k, g) in groups.iter().enumerate() {
            if g.is_empty() {
                return Err(Error::InvalidArgument(format!("column group {k} is empty")));
            }
            if let Some(&bad) = g.iter().find(|&&c| c >= a.cols()) {
                return Err(Error::IndexOutOfRange {
                    what: "grouped column",
                    index: bad,
                    len: a.cols(),
                });
            }
        }
        let penalty = u32::try_from(2 * a.ones() + 1)
            .map_err(|_| Error::InvalidArgument("matrix too large for group penalty".into()))?;
        Ok(ColumnGroups { groups, penalty })
    }

    pub fn groups(&self) -> &[BTreeSet<usize>] {
        &self.groups
    }

    pub fn penalty(&self) -> u32 {
        self.penalty
    }

    /// Number of groups containing exactly one of the two columns.
    /// Columns outside the matrix (the sentinel) belong to no group.
    pub fn separation(&self, i: usize, j: usize) -> u32 {
        self.groups
            .iter()
            .filter(|g| g.contains(&i) != g.contains(&j))
            .count() as u32
    }

    /// Whether every group occupies contiguous positions of `order`.
    pub fn all_consecutive(&self, order: &[usize]) -> bool {
        self.first_violation(order).is_none()
    }

    pub fn first_violation(&self, order: &[usize]) -> Option<usize> {
        let mut pos = vec![usize::MAX; order.iter().max().map_or(0, |m| m + 1)];
        for (k, &c) in order.iter().enumerate() {
            pos[c] = k;
        }
        self.groups.iter().position(|g| {
            let (lo, hi) = g.iter().fold((usize::MAX, 0), |(lo, hi), &c| {
                let p = pos.get(c).copied().unwrap_or(usize::MAX);
                (lo.min(p), hi.max(p))
            });
            hi == usize::MAX || lo == usize::MAX || hi - lo + 1 != g.len()
        })
    }

    /// Re-expresses the groups over the columns of a collapsed matrix.
    /// Returns `None` when some collapsed column mixes members and
    /// non-members of a group.
    pub fn collapse(&self, collapsed: &BinaryMatrix, group_of: &[usize]) -> Option<ColumnGroups> {
        let mut groups = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            let mapped: BTreeSet<usize> = g.iter().map(|&c| group_of[c]).collect();
            for (c, &cg) in group_of.iter().enumerate() {
                if mapped.contains(&cg) && !g.contains(&c) {
                    return None;
                }
            }
            groups.push(mapped);
        }
        ColumnGroups::new(collapsed, groups).ok()
    }
}

/// Positive per-row weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowWeights(Vec<u32>);

impl RowWeights {
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::InvalidArgument(format!("weight of row {i} is zero")));
        }
        Ok(RowWeights(weights))
    }

    pub fn unit(rows: usize) -> Self {
        RowWeights(vec![1; rows])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn finish(a: &BinaryMatrix, f: impl FnMut(usize, usize) -> u32) -> TspInstance {
    TspInstance::from_fn(a.cols() + 1, a.cols(), f)
        .expect("generated distances are symmetric")
        .with_granularity(2)
}

/// Hamming distances between the columns of `a` plus a zero column.
pub fn build_plain(a: &BinaryMatrix) -> TspInstance {
    let ext = a.with_zero_column();
    finish(a, |i, j| ext.hamming_unchecked(i, j) as u32)
}

/// Hamming distances inflated by `penalty` for every group the edge
/// enters or leaves.
pub fn build_grouped(a: &BinaryMatrix, groups: &ColumnGroups) -> TspInstance {
    let ext = a.with_zero_column();
    finish(a, |i, j| {
        ext.hamming_unchecked(i, j) as u32 + groups.penalty() * groups.separation(i, j)
    })
}

/// Distances `sum_k w[k] * |A'[k][i] - A'[k][j]|`.
pub fn build_weighted(a: &BinaryMatrix, weights: &RowWeights) -> Result<TspInstance> {
    if weights.len() != a.rows() {
        return Err(Error::LengthMismatch {
            what: "row weights",
            expected: a.rows(),
            found: weights.len(),
        });
    }
    let ext = a.with_zero_column();
    let w = weights.as_slice();
    Ok(finish(a, |i, j| {
        (0..a.rows())
            .filter(|&k| ext.get(k, i) != ext.get(k, j))
            .map(|k| w[k])
            .sum()
    }))
}

/// Groups forcing rows `i1` and `i2` to be single segments.
pub fn groups_from_two_rows(a: &BinaryMatrix, i1: usize, i2: usize) -> Result<ColumnGroups> {
    for i in [i1, i2] {
        if i >= a.rows() {
            return Err(Error::IndexOutOfRange {
                what: "row",
                index: i,
                len: a.rows(),
            });
        }
        if a.row_ones(i) == 0 {
            return Err(Error::EmptyRow(i));
        }
    }
    if i1 == i2 {
        return Err(Error::InvalidArgument(format!(
            "fixed rows must differ, got {i1} twice"
        )));
    }
    ColumnGroups::new(
        a,
        vec![
            a.row_support(i1).into_iter().collect(),
            a.row_support(i2).into_iter().collect(),
        ],
    )
}

/// Rotates the tour so the sentinel is the (dropped) boundary.
pub fn tour_to_permutation(tour: &Tour, inst: &TspInstance) -> Result<ColumnPermutation> {
    let order = tour.as_slice();
    if order.len() != inst.size() {
        return Err(Error::InvalidTour(format!(
            "tour visits {} vertices, instance has {}",
            order.len(),
            inst.size()
        )));
    }
    let mut seen = vec![false; inst.size()];
    for &v in order {
        if v >= inst.size() || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidTour(format!("vertex {v} repeated or out of range")));
        }
    }
    let k = order
        .iter()
        .position(|&v| v == inst.sentinel())
        .ok_or_else(|| Error::InvalidTour("sentinel missing".into()))?;
    let sentinel = inst.sentinel();
    let rotated: Vec<usize> = order[k + 1..]
        .iter()
        .chain(&order[..k])
        .map(|&v| if v > sentinel { v - 1 } else { v })
        .collect();
    ColumnPermutation::new(rotated)
}

/// TSPLIB95 document with an explicit full distance matrix.
pub fn export_tsplib(inst: &TspInstance, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME: {name}");
    let _ = writeln!(out, "TYPE: TSP");
    let _ = writeln!(out, "COMMENT: linear diagram column ordering, sentinel vertex {}", inst.sentinel() + 1);
    let _ = writeln!(out, "DIMENSION: {}", inst.size());
    let _ = writeln!(out, "EDGE_WEIGHT_TYPE: EXPLICIT");
    let _ = writeln!(out, "EDGE_WEIGHT_FORMAT: FULL_MATRIX");
    let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
    for i in 0..inst.size() {
        let row: Vec<String> = inst.row(i).iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out.push_str("EOF\n");
    out
}

/// Reads back a FULL_MATRIX TSPLIB document. The sentinel is taken to be
/// the last vertex.
pub fn parse_tsplib(text: &str) -> Result<TspInstance> {
    let mut dimension = None;
    let mut lines = text.lines().enumerate();
    for (k, line) in lines.by_ref() {
        let line = line.trim();
        if line == "EDGE_WEIGHT_SECTION" {
            break;
        }
        let Some((key, value)) = line.split_once(':') else {
            continue;
        };
        let value = value.trim();
        match key.trim() {
            "DIMENSION" => {
                dimension = Some(value.parse::<usize>().map_err(|e| {
                    Error::parse(format!("line {}", k + 1), e.to_string())
                })?)
            }
            "EDGE_WEIGHT_FORMAT" if value != "FULL_MATRIX" => {
                return Err(Error::parse(
                    format!("line {}", k + 1),
                    format!("unsupported edge weight format {value}"),
                ))
            }
            "TYPE" if value != "TSP" => {
                return Err(Error::parse(
                    format!("line {}", k + 1),
                    format!("unsupported problem type {value}"),
                ))
            }
            _ => {}
        }
    }
    let n = dimension.ok_or_else(|| Error::parse("header", "DIMENSION missing"))?;
    let mut dist = Vec::with_capacity(n * n);
    for (k, line) in lines {
        if line.trim() == "EOF" {
            break;
        }
        for tok in line.split_whitespace() {
            dist.push(
                tok.parse::<u32>()
                    .map_err(|e| Error::parse(format!("line {}", k + 1), e.to_string()))?,
            );
        }
    }
    if n == 0 {
        return Err(Error::parse("header", "DIMENSION must be positive"));
    }
    TspInstance::new(n, dist, n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BinaryMatrix {
        BinaryMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn plain_example() {
        let inst = build_plain(&m(&[&[1, 0, 1]]));
        assert_eq!(inst.size(), 4);
        assert_eq!(inst.sentinel(), 3);
        assert_eq!(inst.dist(3, 0), 1);
        assert_eq!(inst.dist(0, 1), 1);
        assert_eq!(inst.dist(0, 2), 0);
    }

    #[test]
    fn plain_on_rowless_matrix_is_all_zero() {
        let inst = build_plain(&BinaryMatrix::zeros(0, 4));
        assert_eq!(inst.size(), 5);
        assert_eq!(inst.max_dist(), 0);
    }

    #[test]
    fn tour_rotation() {
        let inst = build_plain(&m(&[&[1, 0, 1]]));
        let t = Tour::new(vec![3, 0, 1, 2]).unwrap();
        assert_eq!(tour_to_permutation(&t, &inst).unwrap().as_slice(), &[0, 1, 2]);
        let t = Tour::new(vec![1, 3, 2, 0]).unwrap();
        assert_eq!(tour_to_permutation(&t, &inst).unwrap().as_slice(), &[2, 0, 1]);
    }

    #[test]
    fn tour_errors() {
        let inst = build_plain(&m(&[&[1, 0, 1]]));
        let short = Tour::new(vec![0, 1, 2]).unwrap();
        assert!(tour_to_permutation(&short, &inst).is_err());
        let generic = TspInstance::from_fn(3, 2, |_, _| 1).unwrap();
        assert!(tour_to_permutation(&Tour::new(vec![0, 1]).unwrap(), &generic).is_err());
    }

    #[test]
    fn grouped_penalty_and_distances() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let g = groups_from_two_rows(&a, 0, 1).unwrap();
        assert_eq!(g.groups()[0], [0, 2].into());
        assert_eq!(g.groups()[1], [1, 2].into());
        // four 1-entries
        assert_eq!(g.penalty(), 9);
        let inst = build_grouped(&a, &g);
        // columns 0 and 1 differ in both rows and are separated by both groups
        assert_eq!(inst.dist(0, 1), 2 + 2 * 9);
        // column 2 is in both groups, column 0 only in the first
        assert_eq!(inst.dist(0, 2), 1 + 9);
        // sentinel belongs to no group
        assert_eq!(inst.dist(3, 2), 2 + 2 * 9);
    }

    #[test]
    fn grouped_without_groups_is_plain() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let g = ColumnGroups::new(&a, vec![]).unwrap();
        assert_eq!(build_grouped(&a, &g), build_plain(&a));
    }

    #[test]
    fn two_row_group_errors() {
        let a = m(&[&[1, 0, 1], &[0, 0, 0]]);
        assert!(matches!(groups_from_two_rows(&a, 0, 1), Err(Error::EmptyRow(1))));
        assert!(groups_from_two_rows(&a, 0, 0).is_err());
        assert!(groups_from_two_rows(&a, 0, 5).is_err());
    }

    #[test]
    fn unit_weights_match_plain() {
        let a = m(&[&[1, 0, 1], &[1, 1, 0]]);
        let w = build_weighted(&a, &RowWeights::unit(2)).unwrap();
        assert_eq!(w.clone().with_granularity(2), build_plain(&a));
        assert!(build_weighted(&a, &RowWeights::unit(3)).is_err());
        assert!(RowWeights::new(vec![1, 0]).is_err());
    }

    #[test]
    fn instance_validation() {
        assert!(TspInstance::new(2, vec![0, 1, 2, 0], 0).is_err());
        assert!(TspInstance::new(2, vec![1, 1, 1, 0], 0).is_err());
        assert!(TspInstance::new(2, vec![0, 1, 1, 0], 2).is_err());
        assert!(TspInstance::new(2, vec![0, 1, 1], 0).is_err());
    }

    #[test]
    fn consecutive_check() {
        let a = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let g = groups_from_two_rows(&a, 0, 1).unwrap();
        assert!(g.all_consecutive(&[0, 2, 1]));
        assert!(!g.all_consecutive(&[0, 1, 2]));
        assert_eq!(g.first_violation(&[0, 1, 2]), Some(0));
    }

    #[test]
    fn tsplib_document() {
        let inst = build_plain(&m(&[&[1, 0, 1]]));
        let doc = export_tsplib(&inst, "tiny");
        assert!(doc.contains("TYPE: TSP"));
        assert!(doc.contains("EDGE_WEIGHT_TYPE: EXPLICIT"));
        assert!(doc.contains("EDGE_WEIGHT_FORMAT: FULL_MATRIX"));
        assert!(doc.contains("DIMENSION: 4"));
        let back = parse_tsplib(&doc).unwrap();
        assert_eq!(back.with_granularity(2), inst);
    }
}
