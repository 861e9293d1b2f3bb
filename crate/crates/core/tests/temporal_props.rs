use modaldoc::temporal::{ag_oracle, eg_oracle, g_oracle, gfp_modality, temporal_doctrine, BranchLift, FCoalgebra};
use proptest::prelude::*;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

fn stream() -> impl Strategy<Value = FCoalgebra> {
    (1usize..=8).prop_flat_map(|n| prop::collection::vec(0..n, n)).prop_map(|next| {
        let states = names(next.len());
        let refs: Vec<&str> = states.iter().map(String::as_str).collect();
        FCoalgebra::stream("S", &refs, &next).unwrap()
    })
}

fn tree() -> impl Strategy<Value = FCoalgebra> {
    (1usize..=8)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0..n, 0..=3), n))
        .prop_map(|children| {
            let states = names(children.len());
            let refs: Vec<&str> = states.iter().map(String::as_str).collect();
            FCoalgebra::tree("T", &refs, children).unwrap()
        })
}

fn check_modality(c: &FCoalgebra, lift: BranchLift, alpha: u64, beta: u64) -> Result<(), TestCaseError> {
    let alpha = alpha & c.full();
    let fix = gfp_modality(c, lift, alpha).unwrap();
    let expected = match lift {
        BranchLift::Identity => g_oracle(c, alpha).unwrap(),
        BranchLift::Forall => ag_oracle(c, alpha),
        BranchLift::Exists => eg_oracle(c, alpha),
    };
    prop_assert_eq!(fix.value, expected);
    prop_assert!(fix.iterations <= c.len() + 1);
    prop_assert_eq!(fix.value & !alpha, 0);
    prop_assert_eq!(gfp_modality(c, lift, fix.value).unwrap().value, fix.value);
    let smaller = alpha & beta;
    let below = gfp_modality(c, lift, smaller).unwrap().value;
    prop_assert_eq!(below & !fix.value, 0);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn g_matches_orbits(c in stream(), alpha in any::<u64>(), beta in any::<u64>()) {
        check_modality(&c, BranchLift::Identity, alpha, beta)?;
    }

    #[test]
    fn ag_matches_reachability(c in tree(), alpha in any::<u64>(), beta in any::<u64>()) {
        check_modality(&c, BranchLift::Forall, alpha, beta)?;
    }

    #[test]
    fn eg_matches_cycles(c in tree(), alpha in any::<u64>(), beta in any::<u64>()) {
        check_modality(&c, BranchLift::Exists, alpha, beta)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn natural_along_homomorphisms(
        first in prop::collection::vec(0usize..3, 3),
        second in prop::collection::vec(0usize..2, 2),
    ) {
        let a = FCoalgebra::stream("A", &["a0", "a1", "a2"], &first).unwrap();
        let b = FCoalgebra::stream("B", &["b0", "b1"], &second).unwrap();
        let inst = temporal_doctrine(vec![a, b], BranchLift::Identity).unwrap();
        prop_assert!(inst.doctrine.check().is_empty());
        prop_assert!(inst.op.check().is_empty());
    }
}
