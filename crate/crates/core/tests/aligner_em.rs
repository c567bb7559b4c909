//! Model 1 / diagonal-prior EM against a dense reference implementation,
//! plus likelihood and symmetrization properties.

use std::collections::{BTreeMap, BTreeSet};

use idiomeval_core::aligner::{
    align_pair, symmetrize, train_diag, train_model1, AlignmentSet, Direction, Heuristic, Prior, SentencePair,
    TranslationTable, NULL_TOKEN,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn bitext(pairs: &[(&str, &str)]) -> Vec<SentencePair> {
    pairs
        .iter()
        .map(|(s, t)| {
            (
                s.split_whitespace().map(String::from).collect(),
                t.split_whitespace().map(String::from).collect(),
            )
        })
        .collect()
}

/// Dense Model 1 EM over every (source, target) cell.
fn dense_model1(data: &[SentencePair], iterations: usize, alpha: f64) -> BTreeMap<(String, String), f64> {
    let tv: BTreeSet<&String> = data.iter().flat_map(|(_, t)| t).collect();
    let null = NULL_TOKEN.to_string();
    let sv: BTreeSet<&String> = data.iter().flat_map(|(s, _)| s).chain([&null]).collect();
    let vf = tv.len() as f64;
    let mut t: BTreeMap<(String, String), f64> = BTreeMap::new();
    for s in &sv {
        for f in &tv {
            t.insert(((*s).clone(), (*f).clone()), 1.0 / vf);
        }
    }
    for _ in 0..iterations {
        let mut counts: BTreeMap<(String, String), f64> = t.keys().map(|k| (k.clone(), 0.0)).collect();
        for (src, tgt) in data {
            let src: Vec<&String> = std::iter::once(&null).chain(src).collect();
            for f in tgt {
                let z: f64 = src.iter().map(|e| t[&((*e).clone(), f.clone())]).sum();
                for e in &src {
                    let key = ((*e).clone(), f.clone());
                    *counts.get_mut(&key).unwrap() += t[&key] / z;
                }
            }
        }
        for s in &sv {
            let total: f64 = tv.iter().map(|f| counts[&((*s).clone(), (*f).clone())]).sum::<f64>() + alpha * vf;
            for f in &tv {
                let key = ((*s).clone(), (*f).clone());
                t.insert(key.clone(), (counts[&key] + alpha) / total);
            }
        }
    }
    t
}

fn random_bitext(seed: u64, pairs: usize) -> Vec<SentencePair> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..pairs)
        .map(|_| {
            let n = rng.gen_range(1..6);
            let m = rng.gen_range(1..6);
            (
                (0..n).map(|_| format!("s{}", rng.gen_range(0..6))).collect(),
                (0..m).map(|_| format!("t{}", rng.gen_range(0..6))).collect(),
            )
        })
        .collect()
}

fn assert_tables_close(a: &TranslationTable, b: &BTreeMap<(String, String), f64>, tol: f64) {
    for ((s, f), p) in b {
        let got = a.prob(s, f);
        assert!((got - p).abs() <= tol, "t({f}|{s}) = {got}, oracle {p}");
    }
}

#[test]
fn toy_em_matches_dense_oracle() {
    let data = bitext(&[("a b", "x y"), ("a", "x")]);
    let table = train_model1(&data, 10, 0.01).unwrap();
    assert!(table.prob("a", "x") > 0.9, "t(x|a) = {}", table.prob("a", "x"));
    assert_tables_close(&table, &dense_model1(&data, 10, 0.01), 1e-12);
    let links = align_pair(&table, "1", &data[0].0, &data[0].1).links;
    assert_eq!(links, [(0, 0), (1, 1)].into());
}

#[test]
fn single_pair_is_certain_after_one_iteration() {
    let table = train_model1(&bitext(&[("a", "x")]), 1, 0.01).unwrap();
    assert!((table.prob("a", "x") - 1.0).abs() < 1e-12);
}

#[test]
fn random_bitext_matches_dense_oracle() {
    for seed in 0..5 {
        let data = random_bitext(seed, 30);
        let table = train_model1(&data, 4, 0.05).unwrap();
        assert_tables_close(&table, &dense_model1(&data, 4, 0.05), 1e-12);
    }
}

#[test]
fn rows_sum_to_one() {
    let data = random_bitext(11, 40);
    for table in [train_model1(&data, 5, 0.01).unwrap(), train_diag(&data, 5, 4.0, 0.01).unwrap()] {
        for s in table.source_words().map(String::from).collect::<Vec<_>>() {
            let sum = table.row_sum(&s).unwrap();
            assert!((sum - 1.0).abs() <= 1e-9, "row {s} sums to {sum}");
        }
    }
}

#[test]
fn zero_lambda_is_model1() {
    let data = random_bitext(3, 50);
    let m1 = train_model1(&data, 5, 0.01).unwrap();
    let diag = train_diag(&data, 5, 0.0, 0.01).unwrap();
    for (s, f, p) in m1.entries() {
        assert!((diag.prob(s, f) - p).abs() <= 1e-9);
    }
    assert_eq!(diag.prior(), Prior::Diagonal { lambda: 0.0 });
    assert!(train_diag(&data, 5, -1.0, 0.01).is_err());
}

#[test]
fn diagonal_prior_prefers_the_diagonal() {
    // uniform table: posteriors follow the prior alone
    let entries = [(NULL_TOKEN, "x", 0.5), (NULL_TOKEN, "y", 0.5), ("a", "x", 0.5), ("a", "y", 0.5), ("b", "x", 0.5), ("b", "y", 0.5)];
    let table = TranslationTable::from_parts(entries, [], Prior::Diagonal { lambda: 4.0 });
    let post = table.posteriors(&["a", "b"], &["x", "y"]);
    // |1/2 - 1/2| = 0 against |2/2 - 1/2| = 1/2, so the ratio is e^(4/2)
    let ratio = 2.0f64.exp();
    assert!((post[0][1] / post[0][2] - ratio).abs() < 1e-12);
    assert!((post[1][2] / post[1][1] - ratio).abs() < 1e-12);
    assert!((post[0][0] - 1.0 / 3.0).abs() < 1e-12);

    let data = bitext(&[("a b", "x y"), ("a b", "x y"), ("b a", "y x")]);
    let trained = train_diag(&data, 5, 4.0, 0.01).unwrap();
    assert_eq!(align_pair(&trained, "p", &data[0].0, &data[0].1).links, [(0, 0), (1, 1)].into());
}

#[test]
fn log_likelihood_never_decreases() {
    for seed in 0..5 {
        let data = random_bitext(100 + seed, 60);
        for table in [train_model1(&data, 8, 0.01).unwrap(), train_diag(&data, 8, 4.0, 0.01).unwrap()] {
            let ll = &table.log_likelihoods;
            assert_eq!(ll.len(), 8);
            for w in ll.windows(2) {
                assert!(w[1] >= w[0] - 1e-6, "{:?}", ll);
            }
        }
    }
}

#[test]
fn argument_errors() {
    let data = bitext(&[("a", "x")]);
    assert!(train_model1(&data, 0, 0.01).is_err());
    assert!(train_model1(&[], 5, 0.01).is_err());
    assert!(train_model1(&data, 5, -0.5).is_err());
}

fn links_strategy(n: usize, m: usize) -> impl Strategy<Value = BTreeSet<(usize, usize)>> {
    prop::collection::btree_set((0..n, 0..m), 0..(n * m))
}

proptest! {
    #[test]
    fn symmetrization_inclusion_chain(
        fwd in links_strategy(5, 6),
        rev in links_strategy(5, 6),
    ) {
        let f = AlignmentSet::new("p", 5, 6, Direction::SrcToTgt).with_links(fwd).unwrap();
        let r = AlignmentSet::new("p", 5, 6, Direction::TgtToSrc).with_links(rev).unwrap();
        let inter = symmetrize(&f, &r, Heuristic::Intersection).unwrap().links;
        let grow = symmetrize(&f, &r, Heuristic::GrowDiagFinalAnd).unwrap().links;
        let union = symmetrize(&f, &r, Heuristic::Union).unwrap().links;
        prop_assert!(inter.is_subset(&grow));
        prop_assert!(grow.is_subset(&union));
        prop_assert_eq!(&inter, &f.links.intersection(&r.links).copied().collect());
        prop_assert_eq!(&union, &f.links.union(&r.links).copied().collect());
    }

    #[test]
    fn identical_directions_are_fixed_points(links in links_strategy(4, 4)) {
        let f = AlignmentSet::new("p", 4, 4, Direction::SrcToTgt).with_links(links.clone()).unwrap();
        for h in [Heuristic::Intersection, Heuristic::Union, Heuristic::GrowDiagFinalAnd] {
            prop_assert_eq!(&symmetrize(&f, &f, h).unwrap().links, &links);
        }
    }

    #[test]
    fn training_is_deterministic(seed in 0u64..1000) {
        let data = random_bitext(seed, 10);
        let a = train_diag(&data, 3, 2.0, 0.01).unwrap();
        let b = train_diag(&data, 3, 2.0, 0.01).unwrap();
        prop_assert_eq!(a.entries().collect::<Vec<_>>(), b.entries().collect::<Vec<_>>());
    }
}
