mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use structlabel::constituency::ConstTree;
use structlabel::dep::{Arc, DepStructure};
use structlabel::metrics::{const_f1, dep_scores, graph_scores, tagging_accuracy, EvalbParams};

fn tree_pairs(seed: u64, count: usize) -> (Vec<DepStructure>, Vec<DepStructure>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=9);
            let gold = tree_from_heads(&random_heads(n, &mut rng));
            let mut arcs = gold.arcs.clone();
            for a in arcs.iter_mut() {
                if rng.gen_bool(0.3) {
                    a.head = rng.gen_range(0..=n);
                }
                if rng.gen_bool(0.2) {
                    a.rel = RELS.choose(&mut rng).unwrap().to_string();
                }
            }
            let pred = DepStructure::tree(gold.sentence.clone(), arcs);
            (gold, pred)
        })
        .unzip()
}

fn graph_pairs(seed: u64, count: usize) -> (Vec<DepStructure>, Vec<DepStructure>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=7);
            let gold = random_graph(n, 0.25, &mut rng);
            let mut arcs: Vec<Arc> = gold.arcs.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
            let extra = random_graph(n, 0.1, &mut rng);
            arcs.extend(extra.arcs);
            let pred = DepStructure::graph(gold.sentence.clone(), arcs);
            (gold, pred)
        })
        .unzip()
}

fn const_pairs(seed: u64, count: usize) -> (Vec<ConstTree>, Vec<ConstTree>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=6);
            let pool = shapes(n);
            let gold = label_shape(pool.choose(&mut rng).unwrap(), 0.2, &mut rng);
            let pred = label_shape(pool.choose(&mut rng).unwrap(), 0.2, &mut rng);
            (gold, pred)
        })
        .unzip()
}

fn permuted<T: Clone>(a: &[T], b: &[T], seed: u64) -> (Vec<T>, Vec<T>) {
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    (
        order.iter().map(|&i| a[i].clone()).collect(),
        order.iter().map(|&i| b[i].clone()).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dependency_scores_are_ordered_and_permutation_invariant(seed in any::<u64>(), count in 0usize..20) {
        let (gold, pred) = tree_pairs(seed, count);
        let r = dep_scores(&gold, &pred).unwrap();
        let (uas, las) = (r.uas.unwrap(), r.las.unwrap());
        let (um, lm) = (r.um.unwrap(), r.lm.unwrap());
        prop_assert!(las.num <= uas.num && uas.den == las.den);
        prop_assert!(lm.num <= um.num);
        let (g2, p2) = permuted(&gold, &pred, seed ^ 1);
        prop_assert_eq!(dep_scores(&g2, &p2).unwrap(), r);
    }

    #[test]
    fn graph_scores_swap_precision_and_recall(seed in any::<u64>(), count in 0usize..20) {
        let (gold, pred) = graph_pairs(seed, count);
        let r = graph_scores(&gold, &pred).unwrap();
        let s = graph_scores(&pred, &gold).unwrap();
        for (a, b) in [(r.uf.unwrap(), s.uf.unwrap()), (r.lf.unwrap(), s.lf.unwrap())] {
            prop_assert_eq!(a.precision(), b.recall());
            prop_assert_eq!(a.recall(), b.precision());
            prop_assert_eq!(a.f1(), b.f1());
        }
        let (g2, p2) = permuted(&gold, &pred, seed ^ 2);
        prop_assert_eq!(graph_scores(&g2, &p2).unwrap(), r);
    }

    #[test]
    fn bracket_scores_self_identity_and_permutation(seed in any::<u64>(), count in 1usize..20) {
        let (gold, pred) = const_pairs(seed, count);
        let params = EvalbParams::default();
        let same = const_f1(&gold, &gold, &params).unwrap().lf.unwrap();
        prop_assert_eq!(same.matched, same.gold);
        prop_assert_eq!(same.gold, same.predicted);
        let r = const_f1(&gold, &pred, &params).unwrap();
        let (g2, p2) = permuted(&gold, &pred, seed ^ 3);
        prop_assert_eq!(const_f1(&g2, &p2, &params).unwrap(), r);
    }

    #[test]
    fn accuracy_is_permutation_invariant(seqs in prop::collection::vec(prop::collection::vec((0u8..4, 0u8..4), 1..8), 0..10), seed in any::<u64>()) {
        let gold: Vec<Vec<String>> = seqs.iter().map(|s| s.iter().map(|p| p.0.to_string()).collect()).collect();
        let pred: Vec<Vec<String>> = seqs.iter().map(|s| s.iter().map(|p| p.1.to_string()).collect()).collect();
        let r = tagging_accuracy(&gold, &pred).unwrap();
        let (g2, p2) = permuted(&gold, &pred, seed);
        prop_assert_eq!(tagging_accuracy(&g2, &p2).unwrap(), r);
    }
}

#[test]
fn empty_corpus_is_undefined() {
    let r = dep_scores(&[], &[]).unwrap();
    assert_eq!(r.uas.unwrap().value(), None);
    assert!(r.to_key_values().contains("uas=nan"));
}
