//! Packed binary matrices, column permutations and the block-count objective.
//!
//! Rows are sets and columns are overlaps (or single elements). A row's
//! `cons1` is the number of maximal runs of 1-entries; summed over rows it
//! is the number of line segments a linear diagram draws for the current
//! column order.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// An `m x n` 0/1 matrix.
///
/// Both a row-major and a column-major packed copy are kept so that run
/// counting (along rows) and Hamming distances (between columns) are word
/// parallel.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    row_words: usize,
    col_words: usize,
    row_bits: Vec<u64>,
    col_bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let row_words = words_for(cols);
        let col_words = words_for(rows);
        BinaryMatrix {
            rows,
            cols,
            row_words,
            col_words,
            row_bits: vec![0; rows * row_words],
            col_bits: vec![0; cols * col_words],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut a = BinaryMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    a.set(i, j);
                }
            }
        }
        a
    }

    /// Builds a matrix from explicit rows of 0/1 values.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    what: "matrix row",
                    expected: cols,
                    found: r.len(),
                });
            }
            if let Some(j) = r.iter().position(|&v| v > 1) {
                return Err(Error::parse(
                    format!("row {i}, column {j}"),
                    format!("entry {} is not 0 or 1", r[j]),
                ));
            }
        }
        Ok(BinaryMatrix::from_fn(rows.len(), cols, |i, j| {
            rows[i].as_ref()[j] == 1
        }))
    }

    fn set(&mut self, i: usize, j: usize) {
        self.row_bits[i * self.row_words + j / WORD] |= 1 << (j % WORD);
        self.col_bits[j * self.col_words + i / WORD] |= 1 << (i % WORD);
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) out of range");
        self.row_bits[i * self.row_words + j / WORD] >> (j % WORD) & 1 == 1
    }

    fn row_slice(&self, i: usize) -> &[u64] {
        &self.row_bits[i * self.row_words..(i + 1) * self.row_words]
    }

    fn col_slice(&self, j: usize) -> &[u64] {
        &self.col_bits[j * self.col_words..(j + 1) * self.col_words]
    }

    /// Packed bit vector of column `j` (bit `i` is row `i`).
    pub fn column_key(&self, j: usize) -> &[u64] {
        self.col_slice(j)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    /// Column indices holding a 1 in row `i`.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        (0..self.cols).filter(|&j| self.get(i, j)).collect()
    }

    /// Row indices holding a 1 in column `j`.
    pub fn column_support(&self, j: usize) -> Vec<usize> {
        (0..self.rows).filter(|&i| self.get(i, j)).collect()
    }

    pub fn row_ones(&self, i: usize) -> usize {
        self.row_slice(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn column_ones(&self, j: usize) -> usize {
        self.col_slice(j).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Total number of 1-entries.
    pub fn ones(&self) -> usize {
        self.row_bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of maximal blocks of consecutive ones in row `i`.
    pub fn cons1_row(&self, i: usize) -> usize {
        let mut carry = 0u64;
        let mut starts = 0;
        for &w in self.row_slice(i) {
            let prev = (w << 1) | carry;
            starts += (w & !prev).count_ones() as usize;
            carry = w >> (WORD - 1);
        }
        starts
    }

    /// Number of line segments: blocks of consecutive ones over all rows.
    pub fn cons1(&self) -> usize {
        (0..self.rows).map(|i| self.cons1_row(i)).sum()
    }

    /// Gaps between blocks; a row without ones contributes zero.
    pub fn splits(&self) -> usize {
        (0..self.rows)
            .map(|i| self.cons1_row(i).saturating_sub(1))
            .sum()
    }

    pub fn nonzero_rows(&self) -> usize {
        (0..self.rows).filter(|&i| self.row_ones(i) > 0).count()
    }

    /// Number of rows in which columns `i` and `j` differ.
    pub fn hamming(&self, i: usize, j: usize) -> Result<usize> {
        for idx in [i, j] {
            if idx >= self.cols {
                return Err(Error::IndexOutOfRange {
                    what: "column",
                    index: idx,
                    len: self.cols,
                });
            }
        }
        Ok(self.hamming_unchecked(i, j))
    }

    pub(crate) fn hamming_unchecked(&self, i: usize, j: usize) -> usize {
        self.col_slice(i)
            .iter()
            .zip(self.col_slice(j))
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Column `j` of the result is column `p[j]` of `self`.
    pub fn apply_permutation(&self, p: &ColumnPermutation) -> Result<Self> {
        if p.len() != self.cols {
            return Err(Error::LengthMismatch {
                what: "permutation",
                expected: self.cols,
                found: p.len(),
            });
        }
        let order = p.as_slice();
        Ok(BinaryMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, order[j])
        }))
    }

    /// Same as `apply_permutation(p).cons1()` without materializing the
    /// permuted matrix. `order` must be a permutation of the columns.
    pub fn cons1_under(&self, order: &[usize]) -> usize {
        (0..self.rows).map(|i| self.row_cons1_under(i, order)).sum()
    }

    pub fn row_cons1_under(&self, i: usize, order: &[usize]) -> usize {
        let mut prev = false;
        let mut blocks = 0;
        for &j in order {
            let cur = self.get(i, j);
            if cur && !prev {
                blocks += 1;
            }
            prev = cur;
        }
        blocks
    }

    /// Weighted objective `sum_i w[i] * cons1_row(i)` under `order`.
    pub fn weighted_cons1_under(&self, weights: &[u32], order: &[usize]) -> u64 {
        assert_eq!(weights.len(), self.rows, "one weight per row");
        (0..self.rows)
            .map(|i| weights[i] as u64 * self.row_cons1_under(i, order) as u64)
            .sum()
    }

    /// Copy with an all-zero column appended on the right.
    pub fn with_zero_column(&self) -> Self {
        BinaryMatrix::from_fn(self.rows, self.cols + 1, |i, j| {
            j < self.cols && self.get(i, j)
        })
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        BinaryMatrix::from_fn(self.rows, columns.len(), |i, j| self.get(i, columns[j]))
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        write!(f, "]")
    }
}

/// A bijection on the column indices, written as the sequence
/// `(p(0), p(1), ...)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnPermutation(Vec<usize>);

impl ColumnPermutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &j in &order {
            if j >= n {
                return Err(Error::InvalidPermutation(format!(
                    "index {j} out of range for length {n}"
                )));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidPermutation(format!("index {j} repeated")));
            }
        }
        Ok(ColumnPermutation(order))
    }

    pub fn identity(n: usize) -> Self {
        ColumnPermutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn reversed(&self) -> Self {
        ColumnPermutation(self.0.iter().rev().copied().collect())
    }

    /// `positions()[c]` is the position of column `c` in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (k, &c) in self.0.iter().enumerate() {
            pos[c] = k;
        }
        pos
    }
}

impl AsRef<[usize]> for ColumnPermutation {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}

/// Groups of identical columns produced by [`collapse_duplicates`].
///
/// Group `g` is column `g` of the collapsed matrix; its members are the
/// original column indices in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseMap {
    groups: Vec<Vec<usize>>,
    original_cols: usize,
}

impl CollapseMap {
    /// Each original column in its own group.
    pub fn singletons(n: usize) -> Self {
        CollapseMap {
            groups: (0..n).map(|j| vec![j]).collect(),
            original_cols: n,
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn original_cols(&self) -> usize {
        self.original_cols
    }

    /// Smallest original index of group `g`.
    pub fn representative(&self, g: usize) -> usize {
        self.groups[g][0]
    }

    /// `group_of()[c]` is the collapsed column holding original column `c`.
    pub fn group_of(&self) -> Vec<usize> {
        let mut of = vec![0; self.original_cols];
        for (g, members) in self.groups.iter().enumerate() {
            for &c in members {
                of[c] = g;
            }
        }
        of
    }
}

/// Merges identical columns. Groups appear in order of first occurrence, so
/// each representative is the smallest index of its group.
pub fn collapse_duplicates(a: &BinaryMatrix) -> (BinaryMatrix, CollapseMap) {
    let mut index: HashMap<&[u64], usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for j in 0..a.cols() {
        match index.get(a.column_key(j)) {
            Some(&g) => groups[g].push(j),
            None => {
                index.insert(a.column_key(j), groups.len());
                groups.push(vec![j]);
            }
        }
    }
    let reps: Vec<usize> = groups.iter().map(|g| g[0]).collect();
    let collapsed = a.select_columns(&reps);
    (
        collapsed,
        CollapseMap {
            groups,
            original_cols: a.cols(),
        },
    )
}

/// Replaces every collapsed column by its group, members kept consecutive
/// and ascending.
pub fn expand_permutation(p: &ColumnPermutation, map: &CollapseMap) -> Result<ColumnPermutation> {
    if p.len() != map.len() {
        return Err(Error::LengthMismatch {
            what: "collapsed permutation",
            expected: map.len(),
            found: p.len(),
        });
    }
    let order = p
        .as_slice()
        .iter()
        .flat_map(|&g| map.groups[g].iter().copied())
        .collect();
    ColumnPermutation::new(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BinaryMatrix {
        BinaryMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn cons1_row_examples() {
        let a = m(&[&[1, 0, 1, 1, 0], &[0, 0, 0, 0, 0], &[1, 1, 1, 1, 1]]);
        assert_eq!(a.cons1_row(0), 2);
        assert_eq!(a.cons1_row(1), 0);
        assert_eq!(a.cons1_row(2), 1);
    }

    #[test]
    fn cons1_examples() {
        assert_eq!(m(&[&[1, 0, 1], &[1, 1, 0]]).cons1(), 3);
        assert_eq!(m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).cons1(), 3);
        assert_eq!(BinaryMatrix::zeros(4, 5).cons1(), 0);
    }

    #[test]
    fn cons1_across_word_boundary() {
        // ones at 62..=65 form a single block spanning two words
        let a = BinaryMatrix::from_fn(1, 130, |_, j| (62..=65).contains(&j) || j == 129);
        assert_eq!(a.cons1_row(0), 2);
        let b = BinaryMatrix::from_fn(1, 128, |_, j| j == 63 || j == 64 || j == 127);
        assert_eq!(b.cons1_row(0), 2);
    }

    #[test]
    fn splits_examples() {
        assert_eq!(m(&[&[1, 0, 1]]).splits(), 1);
        assert_eq!(m(&[&[0, 0]]).splits(), 0);
    }

    #[test]
    fn hamming_examples() {
        let a = m(&[&[1, 0, 1], &[0, 0, 0], &[1, 1, 1]]);
        assert_eq!(a.hamming(0, 1).unwrap(), 1);
        assert_eq!(a.hamming(2, 2).unwrap(), 0);
        assert!(matches!(
            a.hamming(0, 3),
            Err(Error::IndexOutOfRange { index: 3, .. })
        ));
    }

    #[test]
    fn permutation_application() {
        let a = m(&[&[1, 0]]);
        let id = ColumnPermutation::identity(2);
        assert_eq!(a.apply_permutation(&id).unwrap(), a);
        let swap = ColumnPermutation::new(vec![1, 0]).unwrap();
        assert_eq!(a.apply_permutation(&swap).unwrap(), m(&[&[0, 1]]));
        let short = ColumnPermutation::identity(1);
        assert!(a.apply_permutation(&short).is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(ColumnPermutation::new(vec![0, 0]).is_err());
        assert!(ColumnPermutation::new(vec![0, 2]).is_err());
        assert!(ColumnPermutation::new(vec![]).is_ok());
    }

    #[test]
    fn collapse_example() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        let (c, map) = collapse_duplicates(&a);
        assert_eq!(c, m(&[&[1, 0], &[0, 1]]));
        assert_eq!(map.groups(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn collapse_all_distinct_is_identity() {
        let a = m(&[&[1, 0, 1], &[1, 1, 0]]);
        let (c, map) = collapse_duplicates(&a);
        assert_eq!(c, a);
        assert_eq!(map, CollapseMap::singletons(3));
    }

    #[test]
    fn zero_columns_collapse_together() {
        let a = m(&[&[0, 1, 0, 0], &[0, 1, 0, 1]]);
        let (c, map) = collapse_duplicates(&a);
        assert_eq!(c.cols(), 3);
        assert_eq!(map.groups(), &[vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn expand_example() {
        let a = m(&[&[1, 0, 1]]);
        let (_, map) = collapse_duplicates(&a);
        assert_eq!(map.groups(), &[vec![0, 2], vec![1]]);
        let p = ColumnPermutation::new(vec![1, 0]).unwrap();
        assert_eq!(expand_permutation(&p, &map).unwrap().as_slice(), &[1, 0, 2]);
        let singles = CollapseMap::singletons(3);
        let q = ColumnPermutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(expand_permutation(&q, &singles).unwrap(), q);
        assert!(expand_permutation(&ColumnPermutation::identity(3), &map).is_err());
    }

    #[test]
    fn degenerate_shapes() {
        let a = BinaryMatrix::zeros(0, 3);
        assert_eq!(a.cons1(), 0);
        let b = BinaryMatrix::zeros(3, 0);
        assert_eq!(b.cons1(), 0);
        let (c, map) = collapse_duplicates(&b);
        assert_eq!(c.cols(), 0);
        assert!(map.is_empty());
    }

    #[test]
    fn from_rows_rejects_ragged_and_non_binary() {
        assert!(BinaryMatrix::from_rows(&[vec![1u8, 0], vec![1]]).is_err());
        assert!(BinaryMatrix::from_rows(&[vec![2u8]]).is_err());
    }
}
