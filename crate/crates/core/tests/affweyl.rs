use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use affschubert::affweyl::{AffineWeylElement, AffineWeylGroup};
use affschubert::rootdata::{RootSystem, TypeLabel};
use proptest::prelude::*;

fn group(t: TypeLabel, r: usize) -> AffineWeylGroup {
    AffineWeylGroup::new(Arc::new(RootSystem::build(t, r).unwrap()))
}

/// Word lengths by breadth-first search on the Cayley graph.
fn bfs_lengths(g: &AffineWeylGroup, max_len: usize) -> BTreeMap<AffineWeylElement, usize> {
    let mut dist = BTreeMap::new();
    let mut queue = VecDeque::new();
    dist.insert(g.identity(), 0);
    queue.push_back(g.identity());
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == max_len {
            continue;
        }
        for i in 0..=g.rank() {
            let y = g.aff_mul(&x, g.generator(i)).unwrap();
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

#[test]
fn length_formulas_match_breadth_first_search() {
    for (t, r) in [
        (TypeLabel::A, 1),
        (TypeLabel::A, 2),
        (TypeLabel::C, 2),
        (TypeLabel::G, 2),
    ] {
        let g = group(t, r);
        let dist = bfs_lengths(&g, 8);
        let oracle: BTreeMap<_, _> = dist
            .iter()
            .filter(|(x, &d)| {
                (1..=r).all(|i| {
                    dist.get(&g.aff_mul(x, g.generator(i)).unwrap())
                        .is_none_or(|&e| e > d)
                })
            })
            .map(|(x, &d)| (x.clone(), d))
            .collect();
        let enumerated: BTreeMap<_, _> = g.enumerate_waf_minus(8).unwrap().into_iter().collect();
        assert_eq!(enumerated, oracle, "{t}{r}");
        for (x, &d) in &oracle {
            assert_eq!(g.length_minrep(x).unwrap(), d);
            assert_eq!(g.length_im(x), d);
            assert_eq!(g.reduced_word(x).len(), d);
            assert_eq!(g.from_word(&g.reduced_word(x)).unwrap(), *x);
        }
        for (x, &d) in &dist {
            assert_eq!(g.length_im(x), d, "{t}{r} {}", g.format(x));
        }
    }
}

#[test]
fn coset_representatives_biject_with_the_coroot_lattice() {
    let g = group(TypeLabel::C, 2);
    let els = g.enumerate_waf_minus(8).unwrap();
    let mut centers: Vec<_> = els.iter().map(|(x, _)| x.center()).collect();
    centers.sort();
    centers.dedup();
    assert_eq!(centers.len(), els.len());
    for (x, _) in &els {
        assert_eq!(g.coset_min_rep(&x.center()), *x);
    }
}

fn word(rank: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..=rank, 0..10)
}

proptest! {
    #[test]
    fn words_in_g2(w in word(2)) {
        let g = group(TypeLabel::G, 2);
        let x = g.from_word(&w).unwrap();
        let len = g.length_im(&x);
        prop_assert!(len <= w.len());
        prop_assert_eq!(len % 2, w.len() % 2);
        prop_assert_eq!(g.is_reduced(&w).unwrap(), len == w.len());
        let inv = g.inverse(&x);
        prop_assert_eq!(g.aff_mul(&x, &inv).unwrap(), g.identity());
        prop_assert_eq!(g.length_im(&inv), len);
        let rep = g.coset_min_rep(&x.center());
        prop_assert!(g.is_coset_min(&rep));
        prop_assert!(g.length_im(&rep) <= len);
        prop_assert_eq!(g.parse(&g.format(&x)).unwrap(), x);
    }

    #[test]
    fn words_in_a3(w in word(3)) {
        let g = group(TypeLabel::A, 3);
        let x = g.from_word(&w).unwrap();
        let rep = g.coset_min_rep(&x.center());
        prop_assert_eq!(rep.center(), x.center());
        prop_assert_eq!(g.length_minrep(&rep).unwrap(), g.length_im(&rep));
        prop_assert_eq!(g.from_word(&g.reduced_word(&x)).unwrap(), x);
    }
}
