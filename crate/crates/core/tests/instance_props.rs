use modaldoc::instances::kripke::{kripke_box, kripke_doctrine, KripkeFrame};
use modaldoc::instances::presheaf::{is_subpresheaf, local_presheaf_op, presheaf_box_local, presheaf_box_oracle, FinPresheaf};
use modaldoc::instances::topology::{interior_naturality_failures, FiniteTopSpace};
use modaldoc::instances::SetObject;
use proptest::prelude::*;

/// A preorder on up to three worlds from an arbitrary relation, closed reflexively and transitively.
fn preorder() -> impl Strategy<Value = KripkeFrame> {
    (1usize..=3).prop_flat_map(|n| prop::collection::vec(any::<bool>(), n * n)).prop_map(|bits| {
        let n = (bits.len() as f64).sqrt() as usize;
        let mut rel: Vec<bool> = bits;
        for w in 0..n {
            rel[w * n + w] = true;
        }
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i * n + m] && rel[m * n + j] {
                        rel[i * n + j] = true;
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> = (0..n * n).filter(|&k| rel[k]).map(|k| (k / n, k % n)).collect();
        KripkeFrame::new((0..n).map(|i| format!("w{i}")).collect(), &pairs).unwrap()
    })
}

/// A presheaf on the chain `w0 ≤ … ≤ w(k-1)` from sizes and one-step maps.
fn chain_presheaf() -> impl Strategy<Value = (KripkeFrame, FinPresheaf)> {
    (1usize..=3)
        .prop_flat_map(|k| prop::collection::vec(1usize..=3, k))
        .prop_flat_map(|sizes| {
            let steps: Vec<_> = (0..sizes.len() - 1)
                .map(|i| prop::collection::vec(0..sizes[i + 1], sizes[i]))
                .collect();
            (Just(sizes), steps)
        })
        .prop_map(|(sizes, steps)| {
            let k = sizes.len();
            let worlds: Vec<String> = (0..k).map(|i| format!("w{i}")).collect();
            let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
            let frame = KripkeFrame::new(worlds, &pairs).unwrap();
            let sets = sizes.iter().map(|&s| (0..s).map(|e| format!("e{e}")).collect()).collect();
            let mut maps = Vec::new();
            for i in 0..k {
                let mut f: Vec<usize> = (0..sizes[i]).collect();
                for j in i + 1..k {
                    f = f.iter().map(|&x| steps[j - 1][x]).collect();
                    maps.push((i, j, f.clone()));
                }
            }
            let d = FinPresheaf::new(&frame, "D", sets, maps).unwrap();
            (frame, d)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kripke_operator_is_pointwise_box(frame in preorder()) {
        let inst = kripke_doctrine(&frame, vec![SetObject::new("2", &["x", "y"])]).unwrap();
        prop_assert!(inst.op.check().is_empty());
        let shape = inst.shapes[0];
        for a in 0..shape.count() {
            let boxed: Vec<usize> = shape
                .decode(a)
                .into_iter()
                .map(|v| kripke_box(&frame, v as u64).unwrap() as usize)
                .collect();
            prop_assert_eq!(inst.op.apply(0, a), shape.encode(&boxed));
        }
    }

    #[test]
    fn presheaf_box_is_largest_subpresheaf((frame, d) in chain_presheaf()) {
        let op = local_presheaf_op(&frame, &d).unwrap();
        prop_assert!(op.check().is_empty());
        for a in 0..1usize << d.total() {
            prop_assert_eq!(presheaf_box_local(&frame, &d, a), presheaf_box_oracle(&frame, &d, a));
        }
        let subs: Vec<usize> = (0..1usize << d.total()).filter(|&m| is_subpresheaf(&frame, &d, m)).collect();
        prop_assert_eq!(op.stable_elements(0), subs);
    }

    #[test]
    fn open_continuous_maps_commute_with_interior(
        generators in prop::collection::vec(0usize..8, 0..4),
        target_generators in prop::collection::vec(0usize..4, 0..3),
        f in prop::collection::vec(0usize..2, 3),
    ) {
        let src = generated_space("X", &["p", "q", "r"], &generators);
        let dst = generated_space("Y", &["u", "v"], &target_generators);
        if src.is_continuous(&dst, &f) && src.is_open_map(&dst, &f) {
            prop_assert!(interior_naturality_failures(&src, &dst, &f).is_empty());
        }
    }
}

/// The topology generated by the given sets under finite unions and intersections.
fn generated_space(name: &str, points: &[&str], generators: &[usize]) -> FiniteTopSpace {
    let full = (1usize << points.len()) - 1;
    let mut opens: Vec<usize> = vec![0, full];
    opens.extend(generators.iter().map(|g| g & full));
    loop {
        let mut next = opens.clone();
        for &a in &opens {
            for &b in &opens {
                next.push(a | b);
                next.push(a & b);
            }
        }
        next.sort_unstable();
        next.dedup();
        if next == opens {
            break;
        }
        opens = next;
    }
    let sets: Vec<Vec<&str>> = opens
        .iter()
        .map(|&o| (0..points.len()).filter(|i| o >> i & 1 == 1).map(|i| points[i]).collect())
        .collect();
    let refs: Vec<&[&str]> = sets.iter().map(Vec::as_slice).collect();
    FiniteTopSpace::new(name, points, &refs).unwrap()
}
