use std::sync::Arc;

use modaldoc::order::{gfp, FinLattice, FinPoset, MonotoneMap};
use proptest::prelude::*;

/// A poset on `n` points from a strictly increasing relation, closed transitively.
fn dag_poset(n: usize, edges: &[bool]) -> (Vec<Vec<bool>>, FinPoset) {
    let mut leq = vec![vec![false; n]; n];
    let mut k = 0;
    for i in 0..n {
        leq[i][i] = true;
        for j in i + 1..n {
            leq[i][j] = edges[k];
            k += 1;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][m] && leq[m][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    let names = (0..n).map(|i| format!("p{i}")).collect();
    let rel = leq.clone();
    (leq, FinPoset::from_fn(names, move |a, b| rel[a][b]).unwrap())
}

/// Downsets of the poset, ordered by inclusion.
fn downsets(leq: &[Vec<bool>]) -> Vec<u64> {
    let n = leq.len();
    (0..1u64 << n)
        .filter(|&d| (0..n).all(|j| d >> j & 1 == 0 || (0..n).all(|i| !leq[i][j] || d >> i & 1 == 1)))
        .collect()
}

fn poset_strategy() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (1usize..=5).prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * (n - 1) / 2)))
}

/// Longest strict chain, counted in steps.
fn height(p: &FinPoset) -> usize {
    let n = p.len();
    let mut longest = vec![0usize; n];
    // element order is not a linear extension, so relax until stable
    for _ in 0..n {
        for a in 0..n {
            for b in 0..n {
                if a != b && p.leq(a, b) {
                    longest[b] = longest[b].max(longest[a] + 1);
                }
            }
        }
    }
    longest.into_iter().max().unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_posets_are_reflexive_and_transitive((n, edges) in poset_strategy()) {
        let (_, p) = dag_poset(n, &edges);
        prop_assert!(p.law_violations().is_empty());
        for a in p.elements() {
            prop_assert!(p.leq(a, a));
            for b in p.elements() {
                for c in p.elements() {
                    prop_assert!(!(p.leq(a, b) && p.leq(b, c)) || p.leq(a, c));
                }
            }
        }
    }

    #[test]
    fn downset_lattice_meets_are_intersections((n, edges) in poset_strategy()) {
        let (leq, _) = dag_poset(n, &edges);
        let ds = downsets(&leq);
        let names = ds.iter().map(|d| format!("{d:#b}")).collect();
        let sets = ds.clone();
        let carrier = Arc::new(FinPoset::from_fn(names, move |a, b| sets[a] & !sets[b] == 0).unwrap());
        let lattice = FinLattice::from_poset(carrier.clone()).unwrap();
        for a in 0..ds.len() {
            for b in 0..ds.len() {
                prop_assert_eq!(ds[lattice.meet(a, b)], ds[a] & ds[b]);
                prop_assert_eq!(ds[lattice.join(a, b)], ds[a] | ds[b]);
                prop_assert_eq!(Some(lattice.meet(a, b)), carrier.infimum(a, b));
                prop_assert_eq!(Some(lattice.join(a, b)), carrier.supremum(a, b));
            }
        }
    }

    #[test]
    fn gfp_is_the_greatest_post_fixed_point(
        (n, edges) in poset_strategy(),
        table in prop::collection::vec(any::<prop::sample::Index>(), 32),
    ) {
        let (leq, _) = dag_poset(n, &edges);
        let ds = downsets(&leq);
        let names = ds.iter().map(|d| format!("{d:#b}")).collect();
        let sets = ds.clone();
        let carrier = Arc::new(FinPoset::from_fn(names, move |a, b| sets[a] & !sets[b] == 0).unwrap());
        let lattice = FinLattice::from_poset(carrier.clone()).unwrap();
        let m = ds.len();
        let raw: Vec<usize> = (0..m).map(|i| table[i % table.len()].index(m)).collect();
        // f(x) = ⋁ { raw(y) | y ≤ x } is monotone
        let graph: Vec<usize> = (0..m)
            .map(|x| lattice.join_all((0..m).filter(|&y| carrier.leq(y, x)).map(|y| raw[y])))
            .collect();
        let f = MonotoneMap::new(carrier.clone(), carrier.clone(), graph).unwrap();
        let fix = gfp(&lattice, &f).unwrap();
        prop_assert_eq!(f.apply(fix.value), fix.value);
        for x in 0..m {
            if carrier.leq(x, f.apply(x)) {
                prop_assert!(carrier.leq(x, fix.value));
            }
        }
        prop_assert!(fix.iterations <= height(&carrier) + 1);
    }
}
