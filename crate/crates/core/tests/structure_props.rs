use std::sync::Arc;

use modaldoc::bundled::{adjunctions, interior_ops};
use modaldoc::comonad::{cmd_of_adjunction, em_doctrine};
use modaldoc::doctrine::{square_doctrine, OneArrow};
use modaldoc::fincat::{FinCategory, Functor};
use modaldoc::interior::{check_modal_one_arrow, InteriorOp};
use proptest::prelude::*;

#[test]
fn bundled_doctrines_and_stable_parts() {
    for n in interior_ops().unwrap() {
        let d = n.op.doctrine();
        assert!(d.check().is_empty(), "{}", n.name);
        let c = d.base();
        for x in c.objects() {
            for y in c.objects() {
                let direct = c.arrow_ids().filter(|&a| c.src(a) == x && c.dst(a) == y).count();
                assert_eq!(c.hom(x, y).len(), direct, "{}", n.name);
            }
            assert_eq!(n.op.image(x), n.op.stable_elements(x), "{}", n.name);
        }
        let (stable, inclusion) = n.op.stable_subdoctrine().unwrap();
        assert!(stable.check().is_empty(), "{}", n.name);
        assert!(inclusion.check().unwrap().is_empty(), "{}", n.name);
        let trivial = InteriorOp::identity(stable.clone());
        assert!(check_modal_one_arrow(&inclusion, &trivial, &n.op).unwrap().is_empty(), "{}", n.name);
    }
}

#[test]
fn squares_whiskers_and_composites() {
    for n in adjunctions().unwrap() {
        let adj = &n.adjunction;
        let (square, diagonal) = square_doctrine(adj.p()).unwrap();
        assert!(square.check().is_empty(), "{}", n.name);
        assert!(diagonal.check().unwrap().is_empty(), "{}", n.name);

        let unit = adj.unit_two_arrow().unwrap();
        assert!(unit.check().unwrap().is_empty(), "{}", n.name);
        let pre = unit.whisker_pre(&OneArrow::identity(adj.p().clone())).unwrap();
        assert!(pre.check().unwrap().is_empty(), "{}", n.name);
        let counit = adj.counit_two_arrow().unwrap();
        let post = counit.whisker_post(adj.right()).unwrap();
        assert!(post.check().unwrap().is_empty(), "{}", n.name);
        let left_whisker = counit.whisker_pre(adj.left()).unwrap();
        assert!(left_whisker.check().unwrap().is_empty(), "{}", n.name);

        let lr = adj.left().after(adj.right()).unwrap();
        let rl = adj.right().after(adj.left()).unwrap();
        let a = adj.left().after(&rl).unwrap();
        let b = lr.after(adj.left()).unwrap();
        assert!(a == b, "{}: composition is not associative", n.name);
        assert!(adj.left().after(&OneArrow::identity(adj.p().clone())).unwrap() == *adj.left());
        assert!(OneArrow::identity(adj.q().clone()).after(adj.left()).unwrap() == *adj.left());
    }
}

#[test]
fn forgetful_functors_are_faithful() {
    for n in adjunctions().unwrap() {
        let bundle = em_doctrine(&cmd_of_adjunction(&n.adjunction).unwrap()).unwrap();
        let cc = &bundle.coalgebras;
        let e = &cc.category;
        for x in e.objects() {
            for y in e.objects() {
                let mut images: Vec<usize> = e.hom(x, y).iter().map(|&a| cc.forgetful.arr(a)).collect();
                let total = images.len();
                images.sort_unstable();
                images.dedup();
                assert_eq!(images.len(), total, "{}", n.name);
            }
        }
    }
}

fn chain(n: usize) -> Arc<FinCategory> {
    Arc::new(FinCategory::thin((0..n).map(|i| format!("c{i}")).collect(), |a, b| a <= b).unwrap())
}

/// The functor on a chain induced by a monotone self-map.
fn monotone_functor(c: &Arc<FinCategory>, values: &[usize]) -> Functor {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let arrows = c
        .arrow_ids()
        .map(|a| c.hom(sorted[c.src(a)], sorted[c.dst(a)])[0])
        .collect();
    Functor::new(c.clone(), c.clone(), sorted, arrows).unwrap()
}

proptest! {
    #[test]
    fn functor_composition_is_associative_and_unital(
        f in prop::collection::vec(0usize..4, 4),
        g in prop::collection::vec(0usize..4, 4),
        h in prop::collection::vec(0usize..4, 4),
    ) {
        let c = chain(4);
        let (f, g, h) = (monotone_functor(&c, &f), monotone_functor(&c, &g), monotone_functor(&c, &h));
        prop_assert!(f.check().is_empty());
        let left = h.after(&g).unwrap().after(&f).unwrap();
        let right = h.after(&g.after(&f).unwrap()).unwrap();
        prop_assert_eq!(left.object_table(), right.object_table());
        prop_assert_eq!(left.arrow_table(), right.arrow_table());
        let id = Functor::identity(c.clone());
        let (fi, i_f) = (f.after(&id).unwrap(), id.after(&f).unwrap());
        prop_assert_eq!(fi.arrow_table(), f.arrow_table());
        prop_assert_eq!(i_f.arrow_table(), f.arrow_table());
    }
}
