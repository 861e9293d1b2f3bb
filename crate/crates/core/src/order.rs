//! Finite posets, monotone maps, finite lattices and the greatest-fixed-point engine.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result, Violation, Violations};

/// A finite partial order over opaque, pairwise distinct identifiers.
///
/// Element `i` is the `i`-th declared identifier; enumeration always follows
/// declaration order.
#[derive(Clone, Debug)]
pub struct FinPoset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
}

impl PartialEq for FinPoset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.leq == other.leq
    }
}

impl Eq for FinPoset {}

fn index_names(names: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(Error::Duplicate(n.clone()));
        }
    }
    Ok(index)
}

/// Validates a declared order: the relation is given as pairs `(lower, upper)`.
///
/// Returns the poset, or every reflexivity, transitivity and antisymmetry
/// failure as an [`Error::Laws`].
pub fn check_poset<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<FinPoset> {
    let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
    let index = index_names(&names)?;
    let n = names.len();
    let mut leq = vec![false; n * n];
    for (a, b) in pairs {
        let ia = *index
            .get(a.as_ref())
            .ok_or_else(|| Error::Unknown(a.as_ref().to_string()))?;
        let ib = *index
            .get(b.as_ref())
            .ok_or_else(|| Error::Unknown(b.as_ref().to_string()))?;
        leq[ia * n + ib] = true;
    }
    FinPoset::from_relation(names, leq)
}

impl FinPoset {
    /// Builds a poset from a relation matrix (`leq[i * n + j]` means `i <= j`), checking the axioms.
    pub fn from_relation(names: Vec<String>, leq: Vec<bool>) -> Result<FinPoset> {
        let index = index_names(&names)?;
        if leq.len() != names.len() * names.len() {
            return Err(Error::Partial("order relation matrix has the wrong size".into()));
        }
        let poset = FinPoset { names, index, leq };
        crate::error::require("order relation", poset.law_violations())?;
        Ok(poset)
    }

    /// Builds a poset from an order predicate, checking the axioms.
    pub fn from_fn(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<FinPoset> {
        let n = names.len();
        let rel = (0..n * n).map(|k| leq(k / n, k % n)).collect();
        FinPoset::from_relation(names, rel)
    }

    /// For orders that are posets by construction (products, suborders, powersets).
    pub(crate) fn from_fn_trusted(
        names: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> FinPoset {
        let n = names.len();
        let index = index_names(&names).expect("generated identifiers are distinct");
        let rel = (0..n * n).map(|k| leq(k / n, k % n)).collect();
        let poset = FinPoset {
            names,
            index,
            leq: rel,
        };
        debug_assert!(n > 64 || poset.law_violations().is_empty());
        poset
    }

    /// The discrete order on the given identifiers.
    pub fn discrete(names: Vec<String>) -> Result<FinPoset> {
        FinPoset::from_fn(names, |a, b| a == b)
    }

    /// A chain in the given order.
    pub fn chain(names: Vec<String>) -> Result<FinPoset> {
        FinPoset::from_fn(names, |a, b| a <= b)
    }

    pub fn one_point(name: &str) -> FinPoset {
        FinPoset::from_fn_trusted(vec![name.to_string()], |_, _| true)
    }

    /// Every reflexivity, antisymmetry and transitivity failure.
    pub fn law_violations(&self) -> Violations {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            if !self.leq(a, a) {
                out.push(Violation::new("reflexivity", self.names[a].clone()));
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if self.leq(a, b) && self.leq(b, a) {
                    out.push(Violation::new(
                        "antisymmetry",
                        format!("({}, {})", self.names[a], self.names[b]),
                    ));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        out.push(Violation::new(
                            "transitivity",
                            format!("({}, {}, {})", self.names[a], self.names[b], self.names[c]),
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.names.len() + b]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.names.len()
    }

    /// All pairs `(a, b)` with `a <= b`.
    pub fn related_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n * n)
            .filter(move |k| self.leq[*k])
            .map(move |k| (k / n, k % n))
    }

    pub fn maximum(&self) -> Option<usize> {
        self.elements().find(|&t| self.elements().all(|x| self.leq(x, t)))
    }

    pub fn minimum(&self) -> Option<usize> {
        self.elements().find(|&b| self.elements().all(|x| self.leq(b, x)))
    }

    /// Greatest lower bound by brute force, if it exists.
    pub fn infimum(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = self
            .elements()
            .filter(|&x| self.leq(x, a) && self.leq(x, b))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&x| self.leq(x, m)))
    }

    /// Least upper bound by brute force, if it exists.
    pub fn supremum(&self, a: usize, b: usize) -> Option<usize> {
        let upper: Vec<usize> = self
            .elements()
            .filter(|&x| self.leq(a, x) && self.leq(b, x))
            .collect();
        upper
            .iter()
            .copied()
            .find(|&m| upper.iter().all(|&x| self.leq(m, x)))
    }

    /// Componentwise product; element `(a, b)` has index `a * right.len() + b`.
    pub fn product(left: &FinPoset, right: &FinPoset) -> FinPoset {
        let m = right.len();
        let names = left
            .elements()
            .flat_map(|a| right.elements().map(move |b| (a, b)))
            .map(|(a, b)| format!("({},{})", left.name(a), right.name(b)))
            .collect();
        FinPoset::from_fn_trusted(names, |x, y| {
            left.leq(x / m, y / m) && right.leq(x % m, y % m)
        })
    }

    /// The induced suborder on `members`, keeping identifiers.
    pub fn suborder(&self, members: &[usize]) -> FinPoset {
        let names = members.iter().map(|&i| self.names[i].clone()).collect();
        FinPoset::from_fn_trusted(names, |a, b| self.leq(members[a], members[b]))
    }
}

/// Pointer equality first, structural equality otherwise.
pub fn same_poset(a: &Arc<FinPoset>, b: &Arc<FinPoset>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A total function between finite posets. Monotonicity is checked by
/// [`MonotoneMap::check_monotone`]; construction only checks totality and range.
#[derive(Clone, Debug)]
pub struct MonotoneMap {
    src: Arc<FinPoset>,
    dst: Arc<FinPoset>,
    graph: Vec<usize>,
}

impl PartialEq for MonotoneMap {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
            && same_poset(&self.src, &other.src)
            && same_poset(&self.dst, &other.dst)
    }
}

impl Eq for MonotoneMap {}

impl MonotoneMap {
    pub fn new(src: Arc<FinPoset>, dst: Arc<FinPoset>, graph: Vec<usize>) -> Result<MonotoneMap> {
        if graph.len() != src.len() {
            return Err(Error::Partial(format!(
                "map defined on {} of {} source elements",
                graph.len(),
                src.len()
            )));
        }
        if let Some((x, &y)) = graph.iter().enumerate().find(|(_, &y)| y >= dst.len()) {
            return Err(Error::Partial(format!(
                "image of `{}` is outside the target (index {y})",
                src.name(x)
            )));
        }
        Ok(MonotoneMap { src, dst, graph })
    }

    pub fn from_fn(
        src: Arc<FinPoset>,
        dst: Arc<FinPoset>,
        f: impl Fn(usize) -> usize,
    ) -> Result<MonotoneMap> {
        let graph = src.elements().map(f).collect();
        MonotoneMap::new(src, dst, graph)
    }

    /// Builds a map from identifier pairs `(source, image)`.
    pub fn from_names<S: AsRef<str>>(
        src: Arc<FinPoset>,
        dst: Arc<FinPoset>,
        pairs: &[(S, S)],
    ) -> Result<MonotoneMap> {
        let mut graph = vec![usize::MAX; src.len()];
        for (a, b) in pairs {
            let ia = src
                .index_of(a.as_ref())
                .ok_or_else(|| Error::Unknown(a.as_ref().to_string()))?;
            let ib = dst
                .index_of(b.as_ref())
                .ok_or_else(|| Error::Unknown(b.as_ref().to_string()))?;
            graph[ia] = ib;
        }
        if let Some(x) = graph.iter().position(|&y| y == usize::MAX) {
            return Err(Error::Partial(format!("no image for `{}`", src.name(x))));
        }
        MonotoneMap::new(src, dst, graph)
    }

    pub fn identity(poset: Arc<FinPoset>) -> MonotoneMap {
        let graph = poset.elements().collect();
        MonotoneMap {
            src: poset.clone(),
            dst: poset,
            graph,
        }
    }

    pub fn constant(src: Arc<FinPoset>, dst: Arc<FinPoset>, value: usize) -> Result<MonotoneMap> {
        let graph = vec![value; src.len()];
        MonotoneMap::new(src, dst, graph)
    }

    pub fn src(&self) -> &Arc<FinPoset> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<FinPoset> {
        &self.dst
    }

    pub fn graph(&self) -> &[usize] {
        &self.graph
    }

    pub fn apply(&self, x: usize) -> usize {
        self.graph[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &MonotoneMap) -> Result<MonotoneMap> {
        if !same_poset(&first.dst, &self.src) {
            return Err(Error::Boundary("composed maps do not meet".into()));
        }
        Ok(MonotoneMap {
            src: first.src.clone(),
            dst: self.dst.clone(),
            graph: first.graph.iter().map(|&y| self.graph[y]).collect(),
        })
    }

    /// Every related pair whose images are unrelated.
    pub fn check_monotone(&self) -> Violations {
        self.src
            .related_pairs()
            .filter(|&(a, b)| !self.dst.leq(self.graph[a], self.graph[b]))
            .map(|(a, b)| {
                Violation::new(
                    "monotonicity",
                    format!("({}, {})", self.src.name(a), self.src.name(b)),
                )
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        same_poset(&self.src, &self.dst) && self.graph.iter().enumerate().all(|(i, &y)| i == y)
    }

    /// Pointwise `self <= other`, returning the first failing source element.
    pub fn first_not_below(&self, other: &MonotoneMap) -> Option<usize> {
        self.src
            .elements()
            .find(|&x| !self.dst.leq(self.graph[x], other.graph[x]))
    }

    /// Target elements not in the image.
    pub fn missed(&self) -> Vec<usize> {
        let mut hit = vec![false; self.dst.len()];
        for &y in &self.graph {
            hit[y] = true;
        }
        (0..self.dst.len()).filter(|&y| !hit[y]).collect()
    }

    /// Pairs of distinct sources with equal image.
    pub fn collisions(&self) -> Vec<(usize, usize)> {
        let mut first: HashMap<usize, usize> = HashMap::new();
        let mut out = Vec::new();
        for (x, &y) in self.graph.iter().enumerate() {
            if let Some(&x0) = first.get(&y) {
                out.push((x0, x));
            } else {
                first.insert(y, x);
            }
        }
        out
    }

    pub fn is_surjective(&self) -> bool {
        self.missed().is_empty()
    }

    pub fn is_injective(&self) -> bool {
        self.collisions().is_empty()
    }

    /// Restricts source and target to suborders, failing if an image leaves `dst`.
    pub fn restrict(
        &self,
        src: Arc<FinPoset>,
        src_members: &[usize],
        dst: Arc<FinPoset>,
        dst_members: &[usize],
    ) -> Result<MonotoneMap> {
        let pos: HashMap<usize, usize> =
            dst_members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut graph = Vec::with_capacity(src_members.len());
        for &x in src_members {
            let y = self.graph[x];
            match pos.get(&y) {
                Some(&j) => graph.push(j),
                None => {
                    return Err(Error::Invalid(format!(
                        "`{}` is sent to `{}`, outside the restricted target",
                        self.src.name(x),
                        self.dst.name(y)
                    )))
                }
            }
        }
        MonotoneMap::new(src, dst, graph)
    }

    /// Renders the graph as `a->b` pairs.
    pub fn describe(&self) -> String {
        self.graph
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}->{}", self.src.name(x), self.dst.name(y)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A finite lattice with precomputed meet and join tables.
#[derive(Clone, Debug)]
pub struct FinLattice {
    carrier: Arc<FinPoset>,
    meet: Vec<usize>,
    join: Vec<usize>,
    top: usize,
    bottom: usize,
}

impl FinLattice {
    /// Computes meets and joins by brute force, failing on the first missing bound.
    pub fn from_poset(carrier: Arc<FinPoset>) -> Result<FinLattice> {
        let n = carrier.len();
        let top = carrier
            .maximum()
            .ok_or_else(|| Error::NotALattice("no top element".into()))?;
        let bottom = carrier
            .minimum()
            .ok_or_else(|| Error::NotALattice("no bottom element".into()))?;
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = carrier.infimum(a, b).ok_or_else(|| {
                    Error::NotALattice(format!("no meet of {} and {}", carrier.name(a), carrier.name(b)))
                })?;
                join[a * n + b] = carrier.supremum(a, b).ok_or_else(|| {
                    Error::NotALattice(format!("no join of {} and {}", carrier.name(a), carrier.name(b)))
                })?;
            }
        }
        Ok(FinLattice {
            carrier,
            meet,
            join,
            top,
            bottom,
        })
    }

    /// Accepts supplied tables after verifying them against brute-force bounds.
    pub fn with_tables(
        carrier: Arc<FinPoset>,
        meet: Vec<usize>,
        join: Vec<usize>,
    ) -> Result<FinLattice> {
        let reference = FinLattice::from_poset(carrier)?;
        let n = reference.carrier.len();
        if meet.len() != n * n || join.len() != n * n {
            return Err(Error::Partial("lattice tables have the wrong size".into()));
        }
        for k in 0..n * n {
            if meet[k] != reference.meet[k] || join[k] != reference.join[k] {
                return Err(Error::NotALattice(format!(
                    "table entry for ({}, {}) is not the order-theoretic bound",
                    reference.carrier.name(k / n),
                    reference.carrier.name(k % n)
                )));
            }
        }
        Ok(reference)
    }

    pub fn carrier(&self) -> &Arc<FinPoset> {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.carrier.leq(a, b)
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }
}

/// Renders a subset of `ground` given as a bitmask, e.g. `{a,c}`.
pub fn subset_name(ground: &[String], mask: u64) -> String {
    let parts: Vec<&str> = ground
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, g)| g.as_str())
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// The powerset of `ground` ordered by inclusion. Element `i` is the subset with bitmask `i`.
pub fn powerset_poset(ground: &[String]) -> FinPoset {
    assert!(ground.len() < 24, "powerset too large to enumerate");
    let size = 1usize << ground.len();
    let names = (0..size).map(|m| subset_name(ground, m as u64)).collect();
    FinPoset::from_fn_trusted(names, |a, b| a & !b == 0)
}

/// The powerset lattice of `ground` with intersection and union.
pub fn powerset_lattice(ground: &[String]) -> Result<FinLattice> {
    let carrier = Arc::new(powerset_poset(ground));
    let n = carrier.len();
    let meet = (0..n * n).map(|k| (k / n) & (k % n)).collect();
    let join = (0..n * n).map(|k| (k / n) | (k % n)).collect();
    Ok(FinLattice {
        carrier,
        meet,
        join,
        top: n - 1,
        bottom: 0,
    })
}

/// Result of a descending fixed-point iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixpoint<T> {
    pub value: T,
    /// Number of applications of the map, including the one confirming stability.
    pub iterations: usize,
}

/// Iterates `step` from `top` until two consecutive values agree.
pub fn iterate_from_top<T: PartialEq>(top: T, mut step: impl FnMut(&T) -> T) -> Fixpoint<T> {
    let mut current = top;
    let mut iterations = 0;
    loop {
        let next = step(&current);
        iterations += 1;
        if next == current {
            return Fixpoint {
                value: current,
                iterations,
            };
        }
        current = next;
    }
}

/// Greatest fixed point of a monotone endomap, by iteration from the top.
pub fn gfp(lattice: &FinLattice, f: &MonotoneMap) -> Result<Fixpoint<usize>> {
    if !same_poset(f.src(), lattice.carrier()) || !same_poset(f.dst(), lattice.carrier()) {
        return Err(Error::Boundary("gfp needs an endomap of the lattice carrier".into()));
    }
    crate::error::require("gfp argument", f.check_monotone())?;
    Ok(iterate_from_top(lattice.top(), |&x| f.apply(x)))
}
