//! Finite commutative quantales, their idempotent core, and the exponential modality `!`.

use std::sync::Arc;

use serde::Serialize;

use crate::adjunction::{vertical_modality, DoctrineAdjunction};
use crate::doctrine::{Doctrine, OneArrow};
use crate::error::{require, Error, Result, Violation, Violations};
use crate::interior::InteriorOp;
use crate::order::{powerset_lattice, FinLattice, FinPoset, MonotoneMap};

use super::{exponential_doctrine, Exponent, FunctionCategory, SetObject};

/// A complete lattice with a commutative, unital, join-preserving multiplication.
#[derive(Clone, Debug)]
pub struct FiniteQuantale {
    pub name: String,
    lattice: FinLattice,
    tensor: Vec<usize>,
    unit: usize,
}

impl FiniteQuantale {
    /// Checks the monoid laws, commutativity, and distribution over binary joins and the empty join.
    ///
    /// On a finite lattice these two distribution laws give distribution over every join.
    pub fn new(name: impl Into<String>, lattice: FinLattice, tensor: Vec<usize>, unit: usize) -> Result<FiniteQuantale> {
        let name = name.into();
        let n = lattice.len();
        if tensor.len() != n * n || unit >= n || tensor.iter().any(|&t| t >= n) {
            return Err(Error::Partial(format!("tensor table of `{name}` is incomplete")));
        }
        let q = FiniteQuantale {
            name,
            lattice,
            tensor,
            unit,
        };
        require(&format!("quantale `{}`", q.name), q.law_violations())?;
        Ok(q)
    }

    pub fn law_violations(&self) -> Violations {
        let n = self.len();
        let l = &self.lattice;
        let nm = |a: usize| l.carrier().name(a).to_string();
        let mut out = Vec::new();
        for a in 0..n {
            if self.tensor(a, self.unit) != a {
                out.push(Violation::new("unit", nm(a)));
            }
            if self.tensor(a, l.bottom()) != l.bottom() {
                out.push(Violation::new("empty join", nm(a)));
            }
            for b in 0..n {
                if self.tensor(a, b) != self.tensor(b, a) {
                    out.push(Violation::new("commutativity", format!("({}, {})", nm(a), nm(b))));
                }
                for c in 0..n {
                    if self.tensor(self.tensor(a, b), c) != self.tensor(a, self.tensor(b, c)) {
                        out.push(Violation::new("associativity", format!("({}, {}, {})", nm(a), nm(b), nm(c))));
                    }
                    if self.tensor(a, l.join(b, c)) != l.join(self.tensor(a, b), self.tensor(a, c)) {
                        out.push(Violation::new("distributivity", format!("({}, {}, {})", nm(a), nm(b), nm(c))));
                    }
                }
            }
        }
        out
    }

    /// `⟨{0,1}, ∧⟩`.
    pub fn boolean() -> FiniteQuantale {
        let lattice = FinLattice::from_poset(Arc::new(FinPoset::chain(vec!["0".into(), "1".into()]).expect("chain")))
            .expect("2-chain is a lattice");
        FiniteQuantale::new("Bool", lattice, vec![0, 0, 0, 1], 1).expect("Boolean quantale")
    }

    /// `{0, ½, 1}` with `x ⊗ y = max(0, x + y − 1)`.
    pub fn lukasiewicz3() -> FiniteQuantale {
        let chain = FinPoset::chain(vec!["0".into(), "½".into(), "1".into()]).expect("chain");
        let lattice = FinLattice::from_poset(Arc::new(chain)).expect("3-chain is a lattice");
        let tensor = (0..9usize).map(|k| (k / 3 + k % 3).saturating_sub(2)).collect();
        FiniteQuantale::new("Ł3", lattice, tensor, 2).expect("Łukasiewicz quantale")
    }

    /// Subsets of a commutative monoid with `A ⊗ B = {ab}` and unit `{e}`.
    pub fn monoid_powerset(name: impl Into<String>, elements: &[&str], product: &[usize], unit: usize) -> Result<FiniteQuantale> {
        let ground: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        let m = ground.len();
        if product.len() != m * m {
            return Err(Error::Partial("monoid table is incomplete".into()));
        }
        let lattice = powerset_lattice(&ground)?;
        let size = 1usize << m;
        let tensor = (0..size * size)
            .map(|k| {
                let (a, b) = (k / size, k % size);
                let mut out = 0;
                for i in (0..m).filter(|i| a >> i & 1 == 1) {
                    for j in (0..m).filter(|j| b >> j & 1 == 1) {
                        out |= 1 << product[i * m + j];
                    }
                }
                out
            })
            .collect();
        FiniteQuantale::new(name, lattice, tensor, 1 << unit)
    }

    /// The powerset quantale of the cyclic group of order two.
    pub fn z2_powerset() -> FiniteQuantale {
        FiniteQuantale::monoid_powerset("P(Z2)", &["e", "g"], &[0, 1, 1, 0], 0).expect("Z/2 monoid")
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn lattice(&self) -> &FinLattice {
        &self.lattice
    }

    pub fn carrier(&self) -> &Arc<FinPoset> {
        self.lattice.carrier()
    }

    pub fn tensor(&self, a: usize, b: usize) -> usize {
        self.tensor[a * self.len() + b]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.lattice.leq(a, b)
    }

    /// `a ⊸ b = ⋁{z | a ⊗ z ≤ b}`.
    pub fn residual(&self, a: usize, b: usize) -> usize {
        self.lattice
            .join_all((0..self.len()).filter(|&z| self.leq(self.tensor(a, z), b)))
    }

    /// `R_Q = {x | x ≤ 1, x ≤ x ⊗ x}`.
    pub fn core_members(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.leq(x, self.unit) && self.leq(x, self.tensor(x, x)))
            .collect()
    }

    /// `{x | x ≤ 1}`, skipping the idempotence filter.
    pub fn fake_core_members(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.leq(x, self.unit)).collect()
    }
}

/// A join-closed subset `R` with inclusion `ι` and coreflection `r(x) = ⋁{y ∈ R | y ≤ x}`.
#[derive(Clone, Debug)]
pub struct QuantaleCore {
    pub members: Vec<usize>,
    pub poset: Arc<FinPoset>,
    pub iota: MonotoneMap,
    pub r: MonotoneMap,
    /// Closure, coreflection and Galois failures.
    pub verification: Violations,
}

/// The core of idempotent elements below the unit.
pub fn quantale_core(q: &FiniteQuantale) -> Result<QuantaleCore> {
    core_from_members(q, q.core_members())
}

/// A core built from an arbitrary member list, e.g. the fake core of a negative test.
pub fn core_from_members(q: &FiniteQuantale, members: Vec<usize>) -> Result<QuantaleCore> {
    let l = q.lattice();
    let poset = Arc::new(q.carrier().suborder(&members));
    let position = |x: usize| members.iter().position(|&m| m == x);
    let mut verification = Vec::new();
    let r_graph = (0..q.len())
        .map(|x| {
            let best = l.join_all(members.iter().copied().filter(|&y| q.leq(y, x)));
            position(best).ok_or_else(|| Error::Closure(format!("core not closed under joins below {}", q.carrier().name(x))))
        })
        .collect::<Result<Vec<_>>>()?;
    let iota = MonotoneMap::new(poset.clone(), q.carrier().clone(), members.clone())?;
    let r = MonotoneMap::new(q.carrier().clone(), poset.clone(), r_graph)?;
    let name = |x: usize| q.carrier().name(x).to_string();
    if position(q.unit()).is_none() {
        verification.push(Violation::new("1 ∈ R", name(q.unit())));
    }
    if position(l.bottom()).is_none() {
        verification.push(Violation::new("⊥ ∈ R", name(l.bottom())));
    }
    for &a in &members {
        for &b in &members {
            if position(q.tensor(a, b)).is_none() {
                verification.push(Violation::new("R closed under ⊗", format!("({}, {})", name(a), name(b))));
            }
            if position(l.join(a, b)).is_none() {
                verification.push(Violation::new("R closed under ∨", format!("({}, {})", name(a), name(b))));
            }
        }
    }
    let ir = iota.after(&r)?;
    for x in 0..q.len() {
        if !q.leq(ir.apply(x), x) {
            verification.push(Violation::new("ι r ≤ id", name(x)));
        }
    }
    if !r.after(&iota)?.is_identity() {
        verification.push(Violation::new("r ι = id", "some core element moves"));
    }
    for (y, &m) in members.iter().enumerate() {
        for x in 0..q.len() {
            if q.leq(m, x) != poset.leq(y, r.apply(x)) {
                verification.push(Violation::new("ι(y) ≤ x ⟺ y ≤ r(x)", format!("({}, {})", name(m), name(x))));
            }
        }
    }
    Ok(QuantaleCore {
        members,
        poset,
        iota,
        r,
        verification,
    })
}

/// `Q^(−)` and `R_Q^(−)` over a fragment of finite sets with `⟨Id, ι∘−⟩ ⊣ ⟨Id, r∘−⟩` and `! = ι∘r∘−`.
#[derive(Clone, Debug)]
pub struct QuantaleInstance {
    pub quantale: FiniteQuantale,
    pub core: QuantaleCore,
    pub base: FunctionCategory,
    pub full: Arc<Doctrine>,
    pub restricted: Arc<Doctrine>,
    pub adjunction: DoctrineAdjunction,
    pub bang: InteriorOp,
    pub shapes: Vec<Exponent>,
    pub core_shapes: Vec<Exponent>,
}

pub fn quantale_doctrine(q: &FiniteQuantale, sets: Vec<SetObject>) -> Result<QuantaleInstance> {
    quantale_doctrine_with_core(q, quantale_core(q)?, sets)
}

pub fn quantale_doctrine_with_core(q: &FiniteQuantale, core: QuantaleCore, sets: Vec<SetObject>) -> Result<QuantaleInstance> {
    let base = FunctionCategory::finset(sets)?;
    let (full, shapes) = exponential_doctrine(q.name.clone(), &base, q.carrier())?;
    let (restricted, core_shapes) = exponential_doctrine(format!("R_{}", q.name), &base, &core.poset)?;
    let left = OneArrow::vertical(restricted.clone(), full.clone(), |x| {
        (0..core_shapes[x].count())
            .map(|a| {
                let values: Vec<usize> = core_shapes[x].decode(a).into_iter().map(|v| core.iota.apply(v)).collect();
                shapes[x].encode(&values)
            })
            .collect()
    })?;
    let right = OneArrow::vertical(full.clone(), restricted.clone(), |x| {
        (0..shapes[x].count())
            .map(|a| {
                let values: Vec<usize> = shapes[x].decode(a).into_iter().map(|v| core.r.apply(v)).collect();
                core_shapes[x].encode(&values)
            })
            .collect()
    })?;
    let adjunction = DoctrineAdjunction::vertical(left, right)?;
    let bang = vertical_modality(&adjunction)?;
    Ok(QuantaleInstance {
        quantale: q.clone(),
        core,
        base,
        full,
        restricted,
        adjunction,
        bang,
        shapes,
        core_shapes,
    })
}

/// Pointwise monoid structure `⟨e_X, *_X, ⊸_X⟩` on `Q^X`.
#[derive(Clone, Debug)]
pub struct PointwiseOps {
    pub shape: Exponent,
    pub unit: usize,
    star: Vec<usize>,
    residual: Vec<usize>,
}

impl PointwiseOps {
    pub fn star(&self, a: usize, b: usize) -> usize {
        self.star[a * self.shape.count() + b]
    }

    pub fn residual(&self, a: usize, b: usize) -> usize {
        self.residual[a * self.shape.count() + b]
    }
}

pub fn quantale_monoid_ops(q: &FiniteQuantale, shape: Exponent) -> PointwiseOps {
    let m = shape.count();
    let combine = |f: &dyn Fn(usize, usize) -> usize| -> Vec<usize> {
        (0..m * m)
            .map(|k| {
                let (a, b) = (shape.decode(k / m), shape.decode(k % m));
                let values: Vec<usize> = a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect();
                shape.encode(&values)
            })
            .collect()
    };
    PointwiseOps {
        shape,
        unit: shape.encode(&vec![q.unit(); shape.len]),
        star: combine(&|x, y| q.tensor(x, y)),
        residual: combine(&|x, y| q.residual(x, y)),
    }
}

/// `α * γ ≤ β ⟺ γ ≤ α ⊸ β` on a fiber, exhaustively.
pub fn residuation_violations(fiber: &FinPoset, ops: &PointwiseOps) -> Violations {
    let m = ops.shape.count();
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            let res = ops.residual(a, b);
            for g in 0..m {
                if fiber.leq(ops.star(a, g), b) != fiber.leq(g, res) {
                    out.push(Violation::new(
                        "residuation",
                        format!("({}, {}, {})", fiber.name(a), fiber.name(b), fiber.name(g)),
                    ));
                }
            }
        }
    }
    out
}

/// Outcome of one bang law over every fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawOutcome {
    pub law: String,
    pub checked: usize,
    /// Cases where the inequality holds with equality.
    pub equalities: usize,
    pub violations: Violations,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BangReport {
    pub quantale: String,
    pub laws: Vec<LawOutcome>,
}

impl BangReport {
    pub fn passes(&self) -> bool {
        self.laws.iter().all(|l| l.violations.is_empty())
    }

    pub fn law(&self, number: usize) -> &LawOutcome {
        &self.laws[number - 1]
    }
}

/// The four exponential laws `!α ≤ e`, `!α ≤ !α * !α`, `e ≤ !e`, `!α * !β ≤ !(α * β)` on every fiber.
pub fn bang_law_suite(inst: &QuantaleInstance) -> BangReport {
    let names = ["(1) !α ≤ e", "(2) !α ≤ !α * !α", "(3) e ≤ !e", "(4) !α * !β ≤ !(α * β)"];
    let mut laws: Vec<LawOutcome> = names
        .iter()
        .map(|n| LawOutcome {
            law: n.to_string(),
            checked: 0,
            equalities: 0,
            violations: Vec::new(),
        })
        .collect();
    let c = inst.base.category.clone();
    for x in c.objects() {
        let fiber = inst.full.fiber(x);
        let ops = quantale_monoid_ops(&inst.quantale, inst.shapes[x]);
        let bang = |a: usize| inst.bang.apply(x, a);
        let e = ops.unit;
        let mut record = |law: usize, lhs: usize, rhs: usize, witness: &dyn Fn() -> String| {
            let outcome = &mut laws[law];
            outcome.checked += 1;
            if lhs == rhs {
                outcome.equalities += 1;
            }
            if !fiber.leq(lhs, rhs) {
                outcome.violations.push(Violation::new(outcome.law.clone(), witness()));
            }
        };
        let at = |a: usize| format!("{} at {}", c.object_name(x), fiber.name(a));
        for a in fiber.elements() {
            let ba = bang(a);
            record(0, ba, e, &|| at(a));
            record(1, ba, ops.star(ba, ba), &|| at(a));
            for b in fiber.elements() {
                let lhs = ops.star(ba, bang(b));
                record(3, lhs, bang(ops.star(a, b)), &|| {
                    format!("{} at ({}, {})", c.object_name(x), fiber.name(a), fiber.name(b))
                });
            }
        }
        record(2, e, bang(e), &|| at(e));
    }
    BangReport {
        quantale: inst.quantale.name.clone(),
        laws,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(max: usize) -> Vec<SetObject> {
        let all = [
            SetObject::new("1", &["x"]),
            SetObject::new("2", &["x", "y"]),
            SetObject::new("3", &["x", "y", "z"]),
        ];
        all[..max].to_vec()
    }

    #[test]
    fn bundled_quantales_validate() {
        for q in [FiniteQuantale::boolean(), FiniteQuantale::lukasiewicz3(), FiniteQuantale::z2_powerset()] {
            assert!(q.law_violations().is_empty(), "{}", q.name);
            assert!(quantale_core(&q).unwrap().verification.is_empty(), "{}", q.name);
        }
    }

    #[test]
    fn broken_distributivity_rejected() {
        let l = FiniteQuantale::lukasiewicz3().lattice().clone();
        // min would be fine; a tensor sending (½,½) to 1 breaks monotone distribution
        let mut t: Vec<usize> = (0..9).map(|k| (k / 3).min(k % 3)).collect();
        t[4] = 2;
        assert!(matches!(FiniteQuantale::new("bad", l, t, 2), Err(Error::Laws { .. })));
    }

    #[test]
    fn cores() {
        assert_eq!(FiniteQuantale::boolean().core_members(), vec![0, 1]);
        let l3 = FiniteQuantale::lukasiewicz3();
        assert_eq!(l3.core_members(), vec![0, 2]);
        let core = quantale_core(&l3).unwrap();
        assert_eq!(core.r.apply(1), 0);
        assert_eq!(l3.residual(1, 0), 1);
        // subsets of Z/2 below {e} that are idempotent: ∅ and {e}
        assert_eq!(FiniteQuantale::z2_powerset().core_members(), vec![0, 1]);
    }

    #[test]
    fn bang_examples() {
        let inst = quantale_doctrine(&FiniteQuantale::boolean(), sets(2)).unwrap();
        assert!(inst.bang.is_identity());
        let inst = quantale_doctrine(&FiniteQuantale::lukasiewicz3(), sets(1)).unwrap();
        assert_eq!(inst.bang.apply(0, 1), 0);
        assert_eq!(inst.bang.apply(0, 2), 2);
        assert!(inst.adjunction.check().unwrap().is_empty());
        assert!(inst.bang.check().is_empty());
    }

    #[test]
    fn pointwise_residuation() {
        let q = FiniteQuantale::lukasiewicz3();
        let inst = quantale_doctrine(&q, sets(2)).unwrap();
        let ops = quantale_monoid_ops(&q, inst.shapes[1]);
        assert!(residuation_violations(inst.full.fiber(1), &ops).is_empty());
        for b in 0..9 {
            assert_eq!(ops.residual(ops.unit, b), b);
        }
        let bool_q = FiniteQuantale::boolean();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(bool_q.residual(a, b), usize::from(a == 0 || b == 1));
            }
        }
    }

    #[test]
    fn bang_laws_and_fake_core() {
        for q in [FiniteQuantale::boolean(), FiniteQuantale::lukasiewicz3()] {
            let inst = quantale_doctrine(&q, sets(3)).unwrap();
            let report = bang_law_suite(&inst);
            assert!(report.passes(), "{report:?}");
        }
        let q = FiniteQuantale::lukasiewicz3();
        let fake = core_from_members(&q, q.fake_core_members()).unwrap();
        let inst = quantale_doctrine_with_core(&q, fake, sets(1)).unwrap();
        let report = bang_law_suite(&inst);
        assert!(!report.law(2).violations.is_empty());
        assert!(report.law(2).violations.iter().any(|v| v.witness == "1 at [½]"));
    }
}
