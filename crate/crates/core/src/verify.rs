//! Seeded self-check of the main invariants, behind `lindiag verify`.
//!
//! Every property compares a library result with an independent oracle
//! (mostly exhaustive search over column orders).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gen::{has_hamiltonian_path, hampath_gadget, random_matrix, random_pqtree, sample_small_graphs};
use crate::matrix::{collapse_duplicates, BinaryMatrix, ColumnPermutation};
use crate::pipeline::{solve_matrix, SolveOptions};
use crate::pqtree::{constrained_min_cons1, contains, permutations, ENUMERATION_CAP};
use crate::reduction::build_plain;
use crate::render::{render_svg, RenderStyle};
use crate::setsystem::SetSystem;
use crate::tsp::{solve_held_karp, SolverConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub trials: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

/// Calls `f` on every permutation of `0..n`.
pub fn for_each_order(n: usize, mut f: impl FnMut(&[usize])) {
    fn go(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            go(v, k + 1, f);
            v.swap(k, i);
        }
    }
    go(&mut (0..n).collect(), 0, &mut f);
}

/// Fewest blocks over all column orders accepted by `keep`.
pub fn brute_min_cons1(a: &BinaryMatrix, mut keep: impl FnMut(&[usize]) -> bool) -> Option<usize> {
    let mut best = None;
    for_each_order(a.cols(), |o| {
        if keep(o) {
            let c = a.cons1_under(o);
            if best.map_or(true, |b| c < b) {
                best = Some(c);
            }
        }
    });
    best
}

fn random_order(n: usize, rng: &mut ChaCha8Rng) -> ColumnPermutation {
    use rand::seq::SliceRandom;
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    ColumnPermutation::new(v).unwrap()
}

fn check(name: &'static str, trials: usize, mut f: impl FnMut(usize) -> Option<String>) -> PropertyOutcome {
    for t in 0..trials {
        if let Some(msg) = f(t) {
            return PropertyOutcome {
                name,
                trials: t + 1,
                failure: Some(msg),
            };
        }
    }
    PropertyOutcome {
        name,
        trials,
        failure: None,
    }
}

/// Runs all properties; `trials` scales the expensive ones down.
pub fn run_all(trials: usize, seed: u64) -> Vec<PropertyOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    out.push(check("tour length equals twice the block count", trials, |t| {
        let (m, n) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let a = random_matrix(m, n, rng.gen_range(0.1..0.7), rng.gen()).unwrap();
        let p = random_order(n, &mut rng);
        let inst = build_plain(&a);
        let mut tour = p.as_slice().to_vec();
        tour.push(n);
        let len = inst.tour_length(&tour);
        let blocks = a.apply_permutation(&p).unwrap().cons1();
        (len != 2 * blocks as u64).then(|| format!("trial {t}: length {len}, blocks {blocks}"))
    }));

    out.push(check("held-karp matches exhaustive search", trials.div_ceil(5), |t| {
        let n = rng.gen_range(1..=7);
        let a = random_matrix(rng.gen_range(1..=8), n, 0.4, rng.gen()).unwrap();
        let hk = solve_held_karp(&build_plain(&a), 22).unwrap().length / 2;
        let bf = brute_min_cons1(&a, |_| true).unwrap() as u64;
        (hk != bf).then(|| format!("trial {t}: held-karp {hk}, exhaustive {bf}"))
    }));

    out.push(check("collapsing keeps the optimum", trials.div_ceil(5), |t| {
        let n = rng.gen_range(2..=7);
        let base = random_matrix(rng.gen_range(1..=6), n, 0.4, rng.gen()).unwrap();
        // duplicate some columns
        let picks: Vec<usize> = (0..n).map(|j| if j > 0 && rng.gen_bool(0.4) { rng.gen_range(0..j) } else { j }).collect();
        let a = base.select_columns(&picks);
        let s = solve_matrix(&a, &SolveOptions::default()).unwrap();
        let bf = brute_min_cons1(&a, |_| true).unwrap();
        let distinct = collapse_duplicates(&a).0.cols();
        (s.blocks != bf || s.distinct_columns != distinct)
            .then(|| format!("trial {t}: collapsed solve {}, exhaustive {bf}", s.blocks))
    }));

    let graphs = sample_small_graphs(6, 3, trials.div_ceil(5).max(1), seed).unwrap();
    out.push(check("incidence gadget threshold matches Hamiltonian paths", graphs.len(), |t| {
        let g = &graphs[t];
        let gadget = hampath_gadget(g).unwrap();
        let opt = brute_min_cons1(&gadget.matrix, |_| true).unwrap() as i64;
        let hp = has_hamiltonian_path(g);
        (hp != (opt <= gadget.threshold)).then(|| format!("graph {t}: path {hp}, optimum {opt}, threshold {}", gadget.threshold))
    }));

    out.push(check("PQ-tree minimum matches enumeration", trials.div_ceil(5), |t| {
        let n = rng.gen_range(2..=7);
        let a = random_matrix(rng.gen_range(1..=6), n, 0.4, rng.gen()).unwrap();
        let tree = random_pqtree(n, 4, rng.gen()).unwrap();
        let all = permutations(&tree, ENUMERATION_CAP).unwrap();
        let best = all.iter().map(|p| a.cons1_under(p.as_slice())).min().unwrap();
        let (p, v) = constrained_min_cons1(&a, &tree, &SolverConfig::default()).unwrap();
        (v as usize != best || !contains(&tree, &p).unwrap())
            .then(|| format!("trial {t}: tree {tree}, dp {v}, enumeration {best}"))
    }));

    out.push(check("drawn segments equal blocks", trials, |t| {
        let (m, n) = (rng.gen_range(1..=10), rng.gen_range(1..=15));
        let a = random_matrix(m, n, 0.4, rng.gen()).unwrap();
        let p = random_order(n, &mut rng);
        let svg = render_svg(&SetSystem::from_matrix_default_names(&a), &p, &RenderStyle::default()).unwrap();
        let drawn = svg.matches("class=\"segment\"").count();
        let blocks = a.cons1_under(p.as_slice());
        (drawn != blocks).then(|| format!("trial {t}: drew {drawn}, blocks {blocks}"))
    }));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        for o in run_all(40, 7) {
            assert!(o.failure.is_none(), "{}: {:?}", o.name, o.failure);
        }
    }
}
