//! Direct column-ordering heuristics used as benchmark baselines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{BinaryMatrix, ColumnPermutation};

#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicConfig {
    /// Randomized restarts; treated as at least 1.
    pub seeds: usize,
    pub seed: u64,
    /// Run [`polish_two_opt`] on the winning order.
    pub polish: bool,
    /// Similarity noise is uniform in `[0, noise)`.
    pub noise: f64,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            seeds: 100,
            seed: 0,
            polish: false,
            noise: 0.5,
        }
    }
}

fn shared(a: &BinaryMatrix, i: usize, j: usize) -> u32 {
    a.column_key(i)
        .iter()
        .zip(a.column_key(j))
        .map(|(x, y)| (x & y).count_ones())
        .sum()
}

fn similarity_matrix(a: &BinaryMatrix) -> Vec<f64> {
    let n = a.cols();
    let mut sim = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let s = shared(a, i, j) as f64;
            sim[i * n + j] = s;
            sim[j * n + i] = s;
        }
    }
    sim
}

/// Greedy chain: start at the heaviest column, then repeatedly append the
/// unplaced column most similar to the last one. Ties go to the heavier
/// column, then the smaller index.
fn greedy_chain(a: &BinaryMatrix, sim: &[f64]) -> Vec<usize> {
    let n = a.cols();
    if n == 0 {
        return Vec::new();
    }
    let weight: Vec<usize> = (0..n).map(|j| a.column_ones(j)).collect();
    let mut placed = vec![false; n];
    let mut cur = (0..n).max_by_key(|&j| (weight[j], std::cmp::Reverse(j))).unwrap();
    let mut order = Vec::with_capacity(n);
    loop {
        placed[cur] = true;
        order.push(cur);
        if order.len() == n {
            return order;
        }
        let mut best: Option<usize> = None;
        for j in (0..n).filter(|&j| !placed[j]) {
            best = match best {
                None => Some(j),
                Some(b) => {
                    let (sj, sb) = (sim[cur * n + j], sim[cur * n + b]);
                    if sj > sb || (sj == sb && weight[j] > weight[b]) {
                        Some(j)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        cur = best.unwrap();
    }
}

/// Groups columns sharing many sets: similarity is the number of rows in
/// which both columns have a 1.
pub fn rodgers_order(a: &BinaryMatrix) -> ColumnPermutation {
    ColumnPermutation::new(greedy_chain(a, &similarity_matrix(a))).expect("greedy emits a permutation")
}

/// Best of `cfg.seeds` greedy chains, each on similarities perturbed by
/// seeded uniform noise. Ties in block count go to the earlier seed.
pub fn multiseed_order(a: &BinaryMatrix, cfg: &HeuristicConfig) -> ColumnPermutation {
    let n = a.cols();
    let base = similarity_matrix(a);
    let mut best: Option<(usize, Vec<usize>)> = None;
    for s in 0..cfg.seeds.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(s as u64);
        let mut sim = base.clone();
        for i in 0..n {
            for j in i + 1..n {
                let x = sim[i * n + j] + cfg.noise * rng.gen::<f64>();
                sim[i * n + j] = x;
                sim[j * n + i] = x;
            }
        }
        let order = greedy_chain(a, &sim);
        let score = a.cons1_under(&order);
        if best.as_ref().map_or(true, |(b, _)| score < *b) {
            best = Some((score, order));
        }
    }
    let p = ColumnPermutation::new(best.unwrap().1).expect("greedy emits a permutation");
    if cfg.polish {
        polish_two_opt(a, &p)
    } else {
        p
    }
}

/// Reverses sub-ranges while that strictly lowers the block count
/// (first improvement, `i` then `j` ascending), until no reversal helps.
pub fn polish_two_opt(a: &BinaryMatrix, p: &ColumnPermutation) -> ColumnPermutation {
    let mut order = p.as_slice().to_vec();
    let n = order.len();
    // distance with an all-zero column standing at both ends
    let d = |x: Option<usize>, y: Option<usize>| -> i64 {
        match (x, y) {
            (Some(x), Some(y)) => a.hamming_unchecked(x, y) as i64,
            (Some(v), None) | (None, Some(v)) => a.column_ones(v) as i64,
            (None, None) => 0,
        }
    };
    let at = |order: &[usize], k: isize| -> Option<usize> {
        (k >= 0 && (k as usize) < order.len()).then(|| order[k as usize])
    };
    loop {
        let mut improved = false;
        for i in 0..n {
            for j in i + 1..n {
                let (pi, xi) = (at(&order, i as isize - 1), Some(order[i]));
                let (xj, nj) = (Some(order[j]), at(&order, j as isize + 1));
                let delta = d(pi, xj) + d(xi, nj) - d(pi, xi) - d(xj, nj);
                if delta < 0 {
                    order[i..=j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    ColumnPermutation::new(order).expect("reversals keep a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BinaryMatrix {
        BinaryMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn rodgers_on_path_matrix() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let p = rodgers_order(&a);
        assert_eq!(p.as_slice()[0], 1);
        assert_eq!(a.cons1_under(p.as_slice()), 3);
        let polished = polish_two_opt(&a, &p);
        assert_eq!(a.cons1_under(polished.as_slice()), 2);
    }

    #[test]
    fn single_and_empty() {
        assert_eq!(rodgers_order(&m(&[&[1]])).as_slice(), &[0]);
        assert!(rodgers_order(&BinaryMatrix::zeros(3, 0)).is_empty());
        assert!(multiseed_order(&BinaryMatrix::zeros(3, 0), &HeuristicConfig::default()).is_empty());
    }

    #[test]
    fn zero_noise_single_seed_is_rodgers() {
        let a = crate::gen::random_matrix(12, 15, 0.3, 4).unwrap();
        let cfg = HeuristicConfig {
            seeds: 1,
            noise: 0.0,
            ..HeuristicConfig::default()
        };
        assert_eq!(multiseed_order(&a, &cfg), rodgers_order(&a));
    }

    #[test]
    fn polish_fixes_split_row() {
        let a = m(&[&[1, 0, 1]]);
        let p = polish_two_opt(&a, &ColumnPermutation::identity(3));
        assert_eq!(a.cons1_under(p.as_slice()), 1);
    }

    #[test]
    fn multiseed_not_worse_on_average() {
        let (mut r, mut s) = (0, 0);
        for seed in 0..100 {
            let a = crate::gen::random_matrix(15, 10, 0.3, seed).unwrap();
            r += a.cons1_under(rodgers_order(&a).as_slice());
            s += a.cons1_under(multiseed_order(&a, &HeuristicConfig::default()).as_slice());
        }
        assert!(s <= r, "multiseed {s} rodgers {r}");
    }
}
