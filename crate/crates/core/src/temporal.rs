//! Temporal modalities on finite coalgebras as greatest fixed points, checked against path oracles.
//!
//! Streams carry a next-state map; trees carry an ordered, possibly empty tuple of children.
//! Subsets of states are `u64` bitmasks.

use std::sync::Arc;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::{Dfs, EdgeRef};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::doctrine::Doctrine;
use crate::error::{Error, Result};
use crate::instances::{powerset_doctrine, FunctionCategory, SetObject};
use crate::interior::InteriorOp;
use crate::order::{iterate_from_top, subset_name, Fixpoint};

/// Largest state space the temporal doctrine tabulates.
pub const STATE_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoalgebraKind {
    Stream,
    Tree,
}

/// How a predicate on states lifts to a predicate on one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BranchLift {
    /// The next state satisfies it (streams only).
    Identity,
    /// Every child satisfies it.
    Forall,
    /// Some child satisfies it.
    Exists,
}

impl BranchLift {
    /// The operator name of the induced modality.
    pub fn modality_name(self) -> &'static str {
        match self {
            BranchLift::Identity => "G",
            BranchLift::Forall => "AG",
            BranchLift::Exists => "EG",
        }
    }
}

/// A finite coalgebra for `X ↦ X` or for finite tuples `X ↦ ⋃ₙ Xⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FCoalgebra {
    pub name: String,
    pub kind: CoalgebraKind,
    pub states: Vec<String>,
    step: Vec<Vec<usize>>,
}

impl FCoalgebra {
    pub fn stream(name: impl Into<String>, states: &[&str], next: &[usize]) -> Result<FCoalgebra> {
        let step = next.iter().map(|&s| vec![s]).collect();
        FCoalgebra::build(name.into(), CoalgebraKind::Stream, states, step)
    }

    pub fn tree(name: impl Into<String>, states: &[&str], children: Vec<Vec<usize>>) -> Result<FCoalgebra> {
        FCoalgebra::build(name.into(), CoalgebraKind::Tree, states, children)
    }

    fn build(name: String, kind: CoalgebraKind, states: &[&str], step: Vec<Vec<usize>>) -> Result<FCoalgebra> {
        let n = states.len();
        if n > 63 {
            return Err(Error::TooLarge {
                what: format!("states of `{name}`"),
                needed: n as u128,
                cap: 63,
            });
        }
        if step.len() != n {
            return Err(Error::Partial(format!("`{name}` needs one step per state")));
        }
        if step.iter().flatten().any(|&s| s >= n) {
            return Err(Error::Invalid(format!("`{name}` steps to a missing state")));
        }
        Ok(FCoalgebra {
            name,
            kind,
            states: states.iter().map(|s| s.to_string()).collect(),
            step,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn full(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// The children of `x`; a single entry for streams.
    pub fn step(&self, x: usize) -> &[usize] {
        &self.step[x]
    }

    pub fn subset_name(&self, mask: u64) -> String {
        subset_name(&self.states, mask)
    }

    /// Parses `{s0,s1}` against the state names.
    pub fn parse_subset(&self, text: &str) -> Result<u64> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Invalid(format!("`{text}` is not a set")))?;
        inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .try_fold(0u64, |acc, s| {
                let i = self
                    .states
                    .iter()
                    .position(|t| t == s)
                    .ok_or_else(|| Error::Unknown(format!("state `{s}` of `{}`", self.name)))?;
                Ok(acc | 1 << i)
            })
    }

    /// Whether `h` commutes with the steps.
    pub fn is_homomorphism(&self, target: &FCoalgebra, h: &[usize]) -> bool {
        self.kind == target.kind
            && h.len() == self.len()
            && (0..self.len()).all(|x| {
                let image: Vec<usize> = self.step[x].iter().map(|&y| h[y]).collect();
                image == target.step[h[x]]
            })
    }

    fn graph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::new();
        let nodes: Vec<NodeIndex> = (0..self.len()).map(|_| g.add_node(())).collect();
        for (x, children) in self.step.iter().enumerate() {
            for &y in children {
                g.add_edge(nodes[x], nodes[y], ());
            }
        }
        g
    }
}

/// `a⁻¹(lift β)`: the states whose step satisfies the lifted predicate.
pub fn lift_preimage(coalg: &FCoalgebra, lift: BranchLift, beta: u64) -> u64 {
    let inside = |y: &usize| beta >> y & 1 == 1;
    (0..coalg.len())
        .filter(|&x| {
            let children = coalg.step(x);
            match lift {
                BranchLift::Identity | BranchLift::Forall => children.iter().all(inside),
                BranchLift::Exists => children.iter().any(inside),
            }
        })
        .fold(0, |acc, x| acc | 1 << x)
}

fn check_lift(coalg: &FCoalgebra, lift: BranchLift) -> Result<()> {
    if lift == BranchLift::Identity && coalg.kind != CoalgebraKind::Stream {
        return Err(Error::Invalid(format!("the identity lift needs a stream, `{}` is a tree", coalg.name)));
    }
    Ok(())
}

/// The greatest fixed point of `β ↦ α ∩ a⁻¹(lift β)`, iterated down from all states.
pub fn gfp_modality(coalg: &FCoalgebra, lift: BranchLift, alpha: u64) -> Result<Fixpoint<u64>> {
    check_lift(coalg, lift)?;
    let alpha = alpha & coalg.full();
    Ok(iterate_from_top(coalg.full(), |&beta| alpha & lift_preimage(coalg, lift, beta)))
}

/// States whose whole orbit stays in `α`.
pub fn g_oracle(coalg: &FCoalgebra, alpha: u64) -> Result<u64> {
    if coalg.kind != CoalgebraKind::Stream {
        return Err(Error::Invalid(format!("G needs a stream, `{}` is a tree", coalg.name)));
    }
    let mut out = 0;
    for x in 0..coalg.len() {
        let mut state = x;
        let mut ok = true;
        // the orbit repeats after at most |A| steps
        for _ in 0..=coalg.len() {
            if alpha >> state & 1 == 0 {
                ok = false;
                break;
            }
            state = coalg.step(state)[0];
        }
        if ok {
            out |= 1 << x;
        }
    }
    Ok(out)
}

/// States all of whose reachable states lie in `α`.
pub fn ag_oracle(coalg: &FCoalgebra, alpha: u64) -> u64 {
    let g = coalg.graph();
    let mut out = 0;
    for x in 0..coalg.len() {
        let mut dfs = Dfs::new(&g, NodeIndex::new(x));
        let mut ok = true;
        while let Some(n) = dfs.next(&g) {
            if alpha >> n.index() & 1 == 0 {
                ok = false;
                break;
            }
        }
        if ok {
            out |= 1 << x;
        }
    }
    out
}

/// States in `α` with an infinite path inside `α`: they reach a cycle of the subgraph induced by `α`.
pub fn eg_oracle(coalg: &FCoalgebra, alpha: u64) -> u64 {
    let full = coalg.graph();
    let inside = |n: NodeIndex| alpha >> n.index() & 1 == 1;
    let mut induced = DiGraph::<(), ()>::new();
    for _ in 0..coalg.len() {
        induced.add_node(());
    }
    for e in full.edge_references() {
        if inside(e.source()) && inside(e.target()) {
            induced.add_edge(e.source(), e.target(), ());
        }
    }
    let mut cyclic = 0u64;
    for scc in tarjan_scc(&induced) {
        let nontrivial = scc.len() > 1 || induced.contains_edge(scc[0], scc[0]);
        if nontrivial && inside(scc[0]) {
            for n in scc {
                cyclic |= 1 << n.index();
            }
        }
    }
    let mut out = 0;
    for x in 0..coalg.len() {
        if !inside(NodeIndex::new(x)) {
            continue;
        }
        let mut dfs = Dfs::new(&induced, NodeIndex::new(x));
        while let Some(n) = dfs.next(&induced) {
            if cyclic >> n.index() & 1 == 1 {
                out |= 1 << x;
                break;
            }
        }
    }
    out
}

/// The path oracle matching `lift`.
pub fn oracle(coalg: &FCoalgebra, lift: BranchLift, alpha: u64) -> Result<u64> {
    let alpha = alpha & coalg.full();
    match lift {
        BranchLift::Identity => g_oracle(coalg, alpha),
        BranchLift::Forall => Ok(ag_oracle(coalg, alpha)),
        BranchLift::Exists => Ok(eg_oracle(coalg, alpha)),
    }
}

/// Powersets of states over the category of coalgebra homomorphisms, with the gfp modality.
#[derive(Clone, Debug)]
pub struct TemporalInstance {
    pub coalgebras: Vec<FCoalgebra>,
    pub lift: BranchLift,
    pub base: FunctionCategory,
    pub doctrine: Arc<Doctrine>,
    pub op: InteriorOp,
    /// Largest iteration count seen while tabulating each coalgebra.
    pub worst_iterations: Vec<usize>,
}

pub fn temporal_doctrine(coalgebras: Vec<FCoalgebra>, lift: BranchLift) -> Result<TemporalInstance> {
    for c in &coalgebras {
        check_lift(c, lift)?;
        if c.len() > STATE_CAP {
            return Err(Error::TooLarge {
                what: format!("states of `{}`", c.name),
                needed: c.len() as u128,
                cap: STATE_CAP as u128,
            });
        }
    }
    let sets = coalgebras
        .iter()
        .map(|c| SetObject {
            name: c.name.clone(),
            elements: c.states.clone(),
        })
        .collect();
    let base = FunctionCategory::new(sets, |s, d, h| coalgebras[s].is_homomorphism(&coalgebras[d], h))?;
    let doctrine = powerset_doctrine(format!("pw_{}", lift.modality_name()), &base)?;
    let mut worst_iterations = Vec::with_capacity(coalgebras.len());
    let mut tables = Vec::with_capacity(coalgebras.len());
    for c in &coalgebras {
        let mut worst = 0;
        let mut table = Vec::with_capacity(1 << c.len());
        for alpha in 0..1u64 << c.len() {
            let fix = gfp_modality(c, lift, alpha)?;
            worst = worst.max(fix.iterations);
            table.push(fix.value as usize);
        }
        worst_iterations.push(worst);
        tables.push(table);
    }
    let op = InteriorOp::from_graphs(doctrine.clone(), |x| tables[x].clone())?;
    Ok(TemporalInstance {
        coalgebras,
        lift,
        base,
        doctrine,
        op,
        worst_iterations,
    })
}

/// One disagreement between the fixed point and its oracle, or an overlong iteration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleMismatch {
    pub coalgebra: String,
    pub lift: BranchLift,
    pub alpha: String,
    pub fixpoint: String,
    pub oracle: String,
    pub iterations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub coalgebras: usize,
    pub subsets: usize,
    pub max_iterations: usize,
    /// Whether every run took at most `|A| + 1` iterations.
    pub iterations_bounded: bool,
    pub mismatches: Vec<OracleMismatch>,
}

impl OracleReport {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty() && self.iterations_bounded
    }

    fn record(&mut self, coalg: &FCoalgebra, lift: BranchLift, alpha: u64) -> Result<()> {
        let fix = gfp_modality(coalg, lift, alpha)?;
        let expected = oracle(coalg, lift, alpha)?;
        self.subsets += 1;
        self.max_iterations = self.max_iterations.max(fix.iterations);
        let bounded = fix.iterations <= coalg.len() + 1;
        self.iterations_bounded &= bounded;
        if fix.value != expected || !bounded {
            self.mismatches.push(OracleMismatch {
                coalgebra: coalg.name.clone(),
                lift,
                alpha: coalg.subset_name(alpha),
                fixpoint: coalg.subset_name(fix.value),
                oracle: coalg.subset_name(expected),
                iterations: fix.iterations,
            });
        }
        Ok(())
    }
}

/// Compares against the oracle on every subset of each coalgebra.
pub fn exhaustive_oracle_check(cases: &[(FCoalgebra, BranchLift)]) -> Result<OracleReport> {
    let mut report = OracleReport {
        iterations_bounded: true,
        ..OracleReport::default()
    };
    for (c, lift) in cases {
        if c.len() > STATE_CAP {
            return Err(Error::TooLarge {
                what: format!("subsets of `{}`", c.name),
                needed: 1u128 << c.len(),
                cap: 1 << STATE_CAP,
            });
        }
        report.coalgebras += 1;
        for alpha in 0..1u64 << c.len() {
            report.record(c, *lift, alpha)?;
        }
    }
    Ok(report)
}

/// A random coalgebra on `1..=max_states` states; trees get up to three children per state.
pub fn random_coalgebra(rng: &mut impl Rng, name: impl Into<String>, kind: CoalgebraKind, max_states: usize) -> FCoalgebra {
    let n = rng.gen_range(1..=max_states.max(1));
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let step = (0..n)
        .map(|_| {
            let width = match kind {
                CoalgebraKind::Stream => 1,
                CoalgebraKind::Tree => rng.gen_range(0..=3),
            };
            (0..width).map(|_| rng.gen_range(0..n)).collect()
        })
        .collect();
    FCoalgebra::build(name.into(), kind, &refs, step).expect("steps are in range")
}

/// `count` seeded random coalgebras, cycling through G, AG and EG.
///
/// Coalgebras with at most five states are checked on every subset, larger ones on `samples` random subsets.
pub fn random_oracle_suite(seed: u64, count: usize, max_states: usize, samples: usize) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lifts = [BranchLift::Identity, BranchLift::Forall, BranchLift::Exists];
    let mut report = OracleReport {
        iterations_bounded: true,
        ..OracleReport::default()
    };
    for i in 0..count {
        let lift = lifts[i % 3];
        let kind = if lift == BranchLift::Identity {
            CoalgebraKind::Stream
        } else {
            *[CoalgebraKind::Stream, CoalgebraKind::Tree].choose(&mut rng).expect("nonempty")
        };
        let c = random_coalgebra(&mut rng, format!("R{i}"), kind, max_states);
        report.coalgebras += 1;
        if c.len() <= 5 {
            for alpha in 0..1u64 << c.len() {
                report.record(&c, lift, alpha)?;
            }
        } else {
            for _ in 0..samples {
                let alpha = rng.gen::<u64>() & c.full();
                report.record(&c, lift, alpha)?;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn branching() -> FCoalgebra {
        FCoalgebra::tree("M", &["s0", "s1", "s2"], vec![vec![1, 2], vec![1], vec![]]).unwrap()
    }

    #[test]
    fn stream_examples() {
        let c = FCoalgebra::stream("S", &["s0", "s1"], &[1, 1]).unwrap();
        assert_eq!(gfp_modality(&c, BranchLift::Identity, 0b11).unwrap().value, 0b11);
        assert_eq!(gfp_modality(&c, BranchLift::Identity, 0b01).unwrap().value, 0);
        assert_eq!(g_oracle(&c, 0b01).unwrap(), 0);
        assert_eq!(g_oracle(&c, 0b10).unwrap(), 0b10);
        let cycle = FCoalgebra::stream("C", &["a", "b", "c"], &[1, 2, 0]).unwrap();
        assert_eq!(g_oracle(&cycle, 0b011).unwrap(), 0);
        assert_eq!(gfp_modality(&cycle, BranchLift::Identity, 0b011).unwrap().value, 0);
    }

    #[test]
    fn tree_examples() {
        let m = branching();
        assert_eq!(gfp_modality(&m, BranchLift::Exists, 0b011).unwrap().value, 0b011);
        assert_eq!(eg_oracle(&m, 0b011), 0b011);
        assert_eq!(eg_oracle(&m, 0), 0);
        // s2 is a leaf: AG holds there, EG does not
        assert_eq!(ag_oracle(&m, 0b100), 0b100);
        assert_eq!(gfp_modality(&m, BranchLift::Forall, 0b100).unwrap().value, 0b100);
        assert_eq!(gfp_modality(&m, BranchLift::Exists, 0b100).unwrap().value, 0);
        assert_eq!(ag_oracle(&m, 0b011), 0b010);
        assert!(gfp_modality(&m, BranchLift::Identity, 0).is_err());
        assert_eq!(m.parse_subset("{s0, s1}").unwrap(), 0b011);
    }

    #[test]
    fn quotient_homomorphism_naturality() {
        let big = FCoalgebra::stream("B", &["a", "b", "c", "d"], &[1, 0, 3, 2]).unwrap();
        let small = FCoalgebra::stream("S", &["x", "y"], &[1, 0]).unwrap();
        assert!(big.is_homomorphism(&small, &[0, 1, 0, 1]));
        let inst = temporal_doctrine(vec![big, small], BranchLift::Identity).unwrap();
        assert!(inst.base.category.num_arrows() > 3);
        assert!(inst.doctrine.check().is_empty());
        assert!(inst.op.check().is_empty());
    }

    #[test]
    fn bundled_trees_match_oracles() {
        let cases = vec![(branching(), BranchLift::Exists), (branching(), BranchLift::Forall)];
        let report = exhaustive_oracle_check(&cases).unwrap();
        assert!(report.passes(), "{:?}", report.mismatches);
    }

    #[test]
    fn random_suite_is_seeded() {
        let a = random_oracle_suite(7, 30, 8, 16).unwrap();
        assert!(a.passes(), "{:?}", a.mismatches);
        assert_eq!(a, random_oracle_suite(7, 30, 8, 16).unwrap());
    }
}
