//! The fixed catalogue of small instances shared by the acceptance suite, the CLI and the benches.

use std::sync::Arc;

use crate::adjunction::DoctrineAdjunction;
use crate::comonad::{em_adjunction, em_doctrine, ma, mc};
use crate::error::Result;
use crate::instances::connectives::{conjunction_modality, forall_modality};
use crate::instances::kripke::{fam_doctrine, kripke_doctrine, IndexedFamily, KripkeFrame};
use crate::instances::presheaf::{presheaf_instance, FinPresheaf, PresheafInstance};
use crate::instances::quantale::{quantale_doctrine, FiniteQuantale, QuantaleInstance};
use crate::instances::topology::{topological_doctrine, FiniteTopSpace};
use crate::instances::{powerset_doctrine, FunctionCategory, SetObject};
use crate::interior::InteriorOp;
use crate::temporal::{temporal_doctrine, BranchLift, FCoalgebra};

#[derive(Clone, Debug)]
pub struct NamedOp {
    pub name: String,
    pub op: InteriorOp,
}

#[derive(Clone, Debug)]
pub struct NamedAdjunction {
    pub name: String,
    pub adjunction: Arc<DoctrineAdjunction>,
}

fn named_op(name: &str, op: InteriorOp) -> NamedOp {
    NamedOp { name: name.into(), op }
}

fn named_adj(name: &str, adjunction: DoctrineAdjunction) -> NamedAdjunction {
    NamedAdjunction {
        name: name.into(),
        adjunction: Arc::new(adjunction),
    }
}

/// `1 = {x}`, `2 = {x,y}`, `3 = {x,y,z}` up to `max`.
pub fn set_fragment(max: usize) -> Vec<SetObject> {
    let all = ["x", "y", "z"];
    (1..=max.min(3)).map(|n| SetObject::new(n.to_string(), &all[..n])).collect()
}

/// Three preorders: a chain, a fork and a two-world cluster beside a lone world.
pub fn kripke_frames() -> Vec<(String, KripkeFrame)> {
    let chain = KripkeFrame::reflexive(&["w0", "w1", "w2"], &[("w0", "w1"), ("w1", "w2"), ("w0", "w2")]);
    let fork = KripkeFrame::reflexive(&["w0", "w1", "w2"], &[("w0", "w1"), ("w0", "w2")]);
    let cluster = KripkeFrame::reflexive(&["a", "b", "c"], &[("a", "b"), ("b", "a")]);
    vec![
        ("chain".into(), chain.expect("chain frame")),
        ("fork".into(), fork.expect("fork frame")),
        ("cluster".into(), cluster.expect("cluster frame")),
    ]
}

/// Reflexive with `a R b R c` but not `a R c`.
pub fn non_transitive_frame() -> KripkeFrame {
    KripkeFrame::reflexive(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).expect("planted frame")
}

pub fn two_chain() -> KripkeFrame {
    KripkeFrame::reflexive(&["w1", "w2"], &[("w1", "w2")]).expect("2-chain")
}

/// Presheaves on the 2-chain that are closed under `RL`: `({a,b} → {*})`, `({a,b,c} → {*})` and `1`.
pub fn chain_presheaves() -> Vec<FinPresheaf> {
    let f = two_chain();
    let strs = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        FinPresheaf::new(&f, "D", vec![strs(&["a", "b"]), strs(&["*"])], vec![(0, 1, vec![0, 0])]).expect("D"),
        FinPresheaf::new(&f, "E", vec![strs(&["a", "b", "c"]), strs(&["*"])], vec![(0, 1, vec![0, 0, 0])]).expect("E"),
        FinPresheaf::constant(&f, "1", &["*"]).expect("terminal"),
    ]
}

/// The constant two-element presheaf, whose `RL`-closure is infinite.
pub fn constant_presheaf() -> FinPresheaf {
    FinPresheaf::constant(&two_chain(), "K", &["a", "b"]).expect("constant presheaf")
}

pub fn presheaf_chain() -> Result<PresheafInstance> {
    presheaf_instance(&two_chain(), chain_presheaves())
}

pub fn presheaf_one_world() -> Result<PresheafInstance> {
    let f = KripkeFrame::reflexive(&["w"], &[])?;
    let d = FinPresheaf::constant(&f, "D", &["a", "b"])?;
    presheaf_instance(&f, vec![d])
}

pub fn quantales() -> Vec<FiniteQuantale> {
    vec![FiniteQuantale::boolean(), FiniteQuantale::lukasiewicz3()]
}

pub fn quantale_instances(max_set: usize) -> Result<Vec<QuantaleInstance>> {
    quantales().iter().map(|q| quantale_doctrine(q, set_fragment(max_set))).collect()
}

/// Stream coalgebras: two 2-cycles, their quotient, and a path into a fixed point.
pub fn streams() -> Vec<FCoalgebra> {
    vec![
        FCoalgebra::stream("B", &["a", "b", "c", "d"], &[1, 0, 3, 2]).expect("B"),
        FCoalgebra::stream("S", &["x", "y"], &[1, 0]).expect("S"),
        FCoalgebra::stream("P", &["s0", "s1"], &[1, 1]).expect("P"),
    ]
}

/// Tree coalgebras: the branching example `s0 ↦ (s1,s2)`, `s1 ↦ (s1)`, `s2 ↦ ()`, and a small cycle with a leaf.
pub fn trees() -> Vec<FCoalgebra> {
    vec![
        FCoalgebra::tree("M", &["s0", "s1", "s2"], vec![vec![1, 2], vec![1], vec![]]).expect("M"),
        FCoalgebra::tree("N", &["u0", "u1", "u2"], vec![vec![1], vec![0, 2], vec![]]).expect("N"),
        FCoalgebra::tree("L", &["l"], vec![vec![]]).expect("L"),
    ]
}

/// Every bundled interior operator that should satisfy the laws.
pub fn interior_ops() -> Result<Vec<NamedOp>> {
    let sets = set_fragment(2);
    let fc = FunctionCategory::finset(sets.clone())?;
    let mut out = vec![named_op("identity on pw", InteriorOp::identity(powerset_doctrine("pw", &fc)?))];
    for (name, frame) in kripke_frames() {
        out.push(named_op(&format!("Kripke {name}"), kripke_doctrine(&frame, sets.clone())?.op));
    }
    let chain = two_chain();
    let families = vec![
        IndexedFamily::new("X", &["a", "b"], &[&["a"], &["a", "b"]])?,
        IndexedFamily::new("Y", &["p"], &[&["p"], &["p"]])?,
    ];
    out.push(named_op("Fam(2-chain)", fam_doctrine(&chain, families)?.op));
    let spaces = vec![
        FiniteTopSpace::sierpinski(),
        FiniteTopSpace::discrete("D", &["p"]),
        FiniteTopSpace::indiscrete("I", &["x", "y"]),
    ];
    out.push(named_op("topology", topological_doctrine(spaces)?.op));
    for inst in quantale_instances(2)? {
        out.push(named_op(&format!("bang {}", inst.quantale.name), inst.bang));
    }
    out.push(named_op("presheaf 2-chain", presheaf_chain()?.op));
    out.push(named_op("temporal G", temporal_doctrine(streams(), BranchLift::Identity)?.op));
    out.push(named_op("temporal AG", temporal_doctrine(trees(), BranchLift::Forall)?.op));
    out.push(named_op("temporal EG", temporal_doctrine(trees(), BranchLift::Exists)?.op));
    Ok(out)
}

/// Every bundled adjunction of doctrines.
pub fn adjunctions() -> Result<Vec<NamedAdjunction>> {
    let sets = set_fragment(2);
    let fc = FunctionCategory::finset(sets.clone())?;
    let pw = powerset_doctrine("pw", &fc)?;
    let mut out = vec![named_adj("identity on pw", DoctrineAdjunction::identity(pw.clone()))];
    for inst in quantale_instances(2)? {
        out.push(named_adj(&format!("quantale {}", inst.quantale.name), inst.adjunction));
    }
    out.push(named_adj("presheaf 2-chain", presheaf_chain()?.adjunction));
    out.push(named_adj("presheaf one world", presheaf_one_world()?.adjunction));
    out.push(named_adj("conjunction", conjunction_modality(&pw)?.adjunction));
    let forall = forall_modality(
        vec![SetObject::new("Y", &["y"]), SetObject::new("Z", &["u", "v"])],
        SetObject::new("X", &["0", "1"]),
    )?;
    out.push(named_adj("forall", forall.modality.adjunction));
    let frames = kripke_frames();
    let kripke = kripke_doctrine(&frames[1].1, set_fragment(1))?;
    out.push(named_adj("MA(Kripke fork)", ma(&kripke.op)?));
    let top = topological_doctrine(vec![FiniteTopSpace::sierpinski()])?;
    out.push(named_adj("EM(MC(Sierpinski))", em_adjunction(&em_doctrine(&mc(&top.op)?)?)?));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_builds() {
        assert_eq!(interior_ops().unwrap().len(), 12);
        assert_eq!(adjunctions().unwrap().len(), 9);
        assert_eq!(presheaf_chain().unwrap().added.len(), 0);
    }
}
