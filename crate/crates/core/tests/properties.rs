use proptest::prelude::*;

use lindiag::formats::{matrix_to_text, parse_matrix_text};
use lindiag::gen::random_pqtree;
use lindiag::heuristics::{multiseed_order, polish_two_opt, rodgers_order, HeuristicConfig};
use lindiag::matrix::{collapse_duplicates, expand_permutation};
use lindiag::pqtree::{contains, permutations, PQTree, ENUMERATION_CAP};
use lindiag::reduction::{build_plain, export_tsplib, parse_tsplib, tour_to_permutation};
use lindiag::render::render_text;
use lindiag::setsystem::SetSystem;
use lindiag::tsp::{solve_brute, Tour};
use lindiag::{BinaryMatrix, ColumnPermutation};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BinaryMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(m, n)| {
        proptest::collection::vec(proptest::collection::vec(0u8..=1, n), m)
            .prop_map(|rows| BinaryMatrix::from_rows(&rows).unwrap())
    })
}

fn with_order(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (BinaryMatrix, Vec<usize>)> {
    matrix(max_rows, max_cols).prop_flat_map(|a| {
        let n = a.cols();
        (Just(a), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #[test]
    fn tour_through_sentinel_is_twice_blocks((a, order) in with_order(15, 15)) {
        let inst = build_plain(&a);
        let mut tour = order.clone();
        tour.push(a.cols());
        prop_assert_eq!(inst.tour_length(&tour), 2 * a.cons1_under(&order) as u64);
        let p = tour_to_permutation(&Tour::new(tour).unwrap(), &inst).unwrap();
        prop_assert_eq!(p.as_slice(), &order[..]);
    }

    #[test]
    fn reversal_keeps_blocks((a, order) in with_order(10, 12)) {
        let rev: Vec<usize> = order.iter().rev().copied().collect();
        prop_assert_eq!(a.cons1_under(&order), a.cons1_under(&rev));
    }

    #[test]
    fn hamming_is_a_metric(a in matrix(12, 8)) {
        let n = a.cols();
        for i in 0..n {
            prop_assert_eq!(a.hamming(i, i).unwrap(), 0);
            for j in 0..n {
                let d = a.hamming(i, j).unwrap();
                prop_assert_eq!(d, a.hamming(j, i).unwrap());
                let naive = (0..a.rows()).filter(|&k| a.get(k, i) != a.get(k, j)).count();
                prop_assert_eq!(d, naive);
                for k in 0..n {
                    prop_assert!(d <= a.hamming(i, k).unwrap() + a.hamming(k, j).unwrap());
                }
            }
        }
    }

    #[test]
    fn expansion_keeps_duplicates_adjacent((a, order) in with_order(4, 12)) {
        let (c, map) = collapse_duplicates(&a);
        let cp: Vec<usize> = order.iter().copied().filter(|&j| j < c.cols()).collect();
        let cp = ColumnPermutation::new(cp).unwrap();
        let full = expand_permutation(&cp, &map).unwrap();
        prop_assert_eq!(full.len(), a.cols());
        prop_assert_eq!(a.cons1_under(full.as_slice()), c.cons1_under(cp.as_slice()));
        for w in full.as_slice().windows(2) {
            let (x, y) = (w[0], w[1]);
            if map.group_of()[x] != map.group_of()[y] {
                // the group of x must be finished
                let pos = full.positions();
                prop_assert!(map.groups()[map.group_of()[x]].iter().all(|&z| pos[z] <= pos[x]));
            }
        }
    }

    #[test]
    fn matrix_text_round_trip(a in matrix(10, 10)) {
        prop_assert_eq!(parse_matrix_text(&matrix_to_text(&a)).unwrap(), a);
    }

    #[test]
    fn set_system_json_round_trip(a in matrix(6, 8)) {
        let s = SetSystem::from_matrix_default_names(&a);
        let back = SetSystem::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back.to_matrix(), a);
        prop_assert_eq!(back, s);
    }

    #[test]
    fn tsplib_round_trip(a in matrix(8, 9)) {
        let inst = build_plain(&a);
        let back = parse_tsplib(&export_tsplib(&inst, "p")).unwrap();
        prop_assert_eq!(back.size(), inst.size());
        for i in 0..inst.size() {
            prop_assert_eq!(back.row(i), inst.row(i));
        }
    }

    #[test]
    fn heuristics_are_valid_and_never_beat_optimum(a in matrix(6, 7), seed in any::<u64>()) {
        let opt = solve_brute(&build_plain(&a)).unwrap().length / 2;
        let cfg = HeuristicConfig { seeds: 5, seed, ..HeuristicConfig::default() };
        let r = rodgers_order(&a);
        let m = multiseed_order(&a, &cfg);
        for p in [&r, &m] {
            prop_assert_eq!(p.len(), a.cols());
            prop_assert!(a.cons1_under(p.as_slice()) as u64 >= opt);
        }
        prop_assert_eq!(multiseed_order(&a, &cfg), m);
        let polished = polish_two_opt(&a, &r);
        prop_assert!(a.cons1_under(polished.as_slice()) <= a.cons1_under(r.as_slice()));
    }

    #[test]
    fn text_rendering_lines((a, order) in with_order(6, 9)) {
        let t = render_text(&a, &ColumnPermutation::new(order).unwrap()).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        prop_assert_eq!(lines.len(), a.rows() + 1);
        for l in &lines[1..] {
            prop_assert_eq!(l.chars().count(), a.cols());
        }
    }

    #[test]
    fn pqtree_text_round_trip(n in 1usize..12, d in 2usize..5, seed in any::<u64>()) {
        let t = if n == 1 { PQTree::universal(1).unwrap() } else { random_pqtree(n, d, seed).unwrap() };
        prop_assert_eq!(PQTree::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn membership_agrees_with_enumeration(n in 2usize..7, d in 2usize..5, seed in any::<u64>()) {
        let t = random_pqtree(n, d, seed).unwrap();
        let all = permutations(&t, ENUMERATION_CAP).unwrap();
        prop_assert_eq!(all.len() as u128, t.count());
        let mut members = 0;
        let mut order: Vec<usize> = (0..n).collect();
        permute(&mut order, 0, &mut |o| {
            let p = ColumnPermutation::new(o.to_vec()).unwrap();
            let inside = contains(&t, &p).unwrap();
            assert_eq!(inside, all.contains(&p), "tree {t} order {o:?}");
            members += inside as usize;
        });
        prop_assert_eq!(members, all.len());
        if matches!(t.root(), lindiag::pqtree::PQNode::Q(_)) {
            for p in &all {
                prop_assert!(all.contains(&p.reversed()));
            }
        }
    }
}

fn permute(v: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}
