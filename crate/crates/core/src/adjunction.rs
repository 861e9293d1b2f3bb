//! Adjunctions between doctrines, the modalities they induce, and their factorizations.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::doctrine::{same_doctrine, Doctrine, OneArrow, TwoArrow};
use crate::error::{require, Error, Result, Violation, Violations};
use crate::fincat::{adjunction_cat, same_category, FinCategory, Functor, NatTransformation};
use crate::interior::{check_modal_one_arrow, InteriorOp};
use crate::order::{subset_name, FinPoset};

/// The octuple `⟨P, Q, L, λ, R, ρ, η, ε⟩`.
///
/// `η` and `ε` live in the base; their 2-arrow readings are derived on demand.
#[derive(Clone, Debug)]
pub struct DoctrineAdjunction {
    left: OneArrow,
    right: OneArrow,
    unit: NatTransformation,
    counit: NatTransformation,
}

impl DoctrineAdjunction {
    pub fn new(
        left: OneArrow,
        right: OneArrow,
        unit: NatTransformation,
        counit: NatTransformation,
    ) -> Result<DoctrineAdjunction> {
        if !same_doctrine(left.src(), right.dst()) || !same_doctrine(left.dst(), right.src()) {
            return Err(Error::Boundary("left and right 1-arrows do not face each other".into()));
        }
        let c = left.src().base();
        let d = left.dst().base();
        let rl = right.functor().after(left.functor())?;
        let lr = left.functor().after(right.functor())?;
        if *unit.src() != Functor::identity(c.clone()) || *unit.dst() != rl {
            return Err(Error::Boundary("unit must go from Id to RL".into()));
        }
        if *counit.src() != lr || *counit.dst() != Functor::identity(d.clone()) {
            return Err(Error::Boundary("counit must go from LR to Id".into()));
        }
        Ok(DoctrineAdjunction {
            left,
            right,
            unit,
            counit,
        })
    }

    /// A vertical adjunction `⟨Id, λ⟩ ⊣ ⟨Id, ρ⟩` over a shared base.
    pub fn vertical(left: OneArrow, right: OneArrow) -> Result<DoctrineAdjunction> {
        let id = Functor::identity(left.src().base().clone());
        let unit = NatTransformation::identity(id);
        DoctrineAdjunction::new(left, right, unit.clone(), unit)
    }

    pub fn identity(doctrine: Arc<Doctrine>) -> DoctrineAdjunction {
        let id = OneArrow::identity(doctrine);
        DoctrineAdjunction::vertical(id.clone(), id).expect("identity adjunction")
    }

    pub fn p(&self) -> &Arc<Doctrine> {
        self.left.src()
    }

    pub fn q(&self) -> &Arc<Doctrine> {
        self.left.dst()
    }

    pub fn left(&self) -> &OneArrow {
        &self.left
    }

    pub fn right(&self) -> &OneArrow {
        &self.right
    }

    pub fn unit(&self) -> &NatTransformation {
        &self.unit
    }

    pub fn counit(&self) -> &NatTransformation {
        &self.counit
    }

    pub fn is_vertical(&self) -> bool {
        self.left.functor().is_identity()
            && self.right.functor().is_identity()
            && self.unit.is_identity()
            && self.counit.is_identity()
    }

    /// `η` as the 2-arrow `⟨Id, id⟩ ⇒ ⟨RL, (ρL)λ⟩`.
    pub fn unit_two_arrow(&self) -> Result<TwoArrow> {
        TwoArrow::new(
            OneArrow::identity(self.p().clone()),
            self.right.after(&self.left)?,
            self.unit.clone(),
        )
    }

    /// `ε` as the 2-arrow `⟨LR, (λR)ρ⟩ ⇒ ⟨Id, id⟩`.
    pub fn counit_two_arrow(&self) -> Result<TwoArrow> {
        TwoArrow::new(
            self.left.after(&self.right)?,
            OneArrow::identity(self.q().clone()),
            self.counit.clone(),
        )
    }

    /// All three groups of conditions, tagged `(i)`, `(ii)`, `(iii)`.
    pub fn check(&self) -> Result<Violations> {
        let tag = |group: &str, v: Violation| Violation::new(format!("{group} {}", v.law), v.witness);
        let mut out: Violations = adjunction_cat(
            self.left.functor(),
            self.right.functor(),
            &self.unit,
            &self.counit,
        )?
        .into_iter()
        .map(|v| tag("(i)", v))
        .collect();
        let base_ok = out.is_empty();
        for (name, arrow) in [("left", &self.left), ("right", &self.right)] {
            match arrow.check() {
                Ok(vs) => out.extend(vs.into_iter().map(|v| tag(&format!("(ii) {name}"), v))),
                Err(e) => out.push(Violation::new(format!("(ii) {name}"), e.to_string())),
            }
        }
        if base_ok {
            for (name, two) in [("unit", self.unit_two_arrow()?), ("counit", self.counit_two_arrow()?)] {
                match two.check() {
                    Ok(vs) => out.extend(vs.into_iter().map(|v| tag(&format!("(iii) {name}"), v))),
                    Err(e) => out.push(Violation::new(format!("(iii) {name}"), e.to_string())),
                }
            }
        }
        Ok(out)
    }
}

/// `λ_X(α) ≤ β ⟺ α ≤ ρ_X(β)` on every fiber of a vertical adjunction.
pub fn fiberwise_galois(adj: &DoctrineAdjunction) -> Result<Violations> {
    if !adj.is_vertical() {
        return Err(Error::Invalid("fiberwise Galois check needs a vertical adjunction".into()));
    }
    let c = adj.p().base();
    let mut out = Vec::new();
    for x in c.objects() {
        let (pf, qf) = (adj.p().fiber(x), adj.q().fiber(x));
        for a in pf.elements() {
            for b in qf.elements() {
                let lhs = qf.leq(adj.left.at(x).apply(a), b);
                let rhs = pf.leq(a, adj.right.at(x).apply(b));
                if lhs != rhs {
                    out.push(Violation::new(
                        "fiberwise Galois",
                        format!("{} at ({}, {})", c.object_name(x), pf.name(a), qf.name(b)),
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// `□ = λ · ρ` on `Q` for a vertical adjunction.
pub fn vertical_modality(adj: &DoctrineAdjunction) -> Result<InteriorOp> {
    if !adj.is_vertical() {
        return Err(Error::Invalid("base functors are not identities".into()));
    }
    InteriorOp::from_graphs(adj.q().clone(), |x| {
        let (lam, rho) = (adj.left.at(x), adj.right.at(x));
        adj.q().fiber(x).elements().map(|b| lam.apply(rho.apply(b))).collect()
    })
}

/// The doctrine `Q L^op` over the base of `P`.
pub fn ql_doctrine(adj: &DoctrineAdjunction) -> Result<Arc<Doctrine>> {
    Ok(Arc::new(adj.q().pullback_along(
        format!("{}L", adj.q().name()),
        adj.left.functor(),
    )?))
}

fn am_graph(adj: &DoctrineAdjunction, x: usize) -> Vec<usize> {
    let lx = adj.left.functor().obj(x);
    let p_eta = adj.p().reindex(adj.unit.at(x));
    let rho = adj.right.at(lx);
    let lam = adj.left.at(x);
    adj.q()
        .fiber(lx)
        .elements()
        .map(|g| lam.apply(p_eta.apply(rho.apply(g))))
        .collect()
}

/// `□_X = λ_X ∘ P(η_X) ∘ ρ_{LX}` on the doctrine `Q L^op`.
pub fn am_modality(adj: &DoctrineAdjunction) -> Result<(Arc<Doctrine>, InteriorOp)> {
    let ql = ql_doctrine(adj)?;
    let op = InteriorOp::from_graphs(ql.clone(), |x| am_graph(adj, x))?;
    Ok((ql, op))
}

/// The same modality on an existing copy of `Q L^op`.
fn am_modality_on(adj: &DoctrineAdjunction, ql: &Arc<Doctrine>) -> Result<InteriorOp> {
    InteriorOp::from_graphs(ql.clone(), |x| am_graph(adj, x))
}

fn base_change_on(
    ql: Arc<Doctrine>,
    q: Arc<Doctrine>,
    left: &Functor,
    right: &Functor,
    unit: &NatTransformation,
    counit: &NatTransformation,
) -> Result<DoctrineAdjunction> {
    let lam = OneArrow::from_graphs(ql.clone(), q.clone(), left.clone(), |x| {
        ql.fiber(x).elements().collect()
    })?;
    let rho = OneArrow::from_graphs(q.clone(), ql, right.clone(), |y| {
        q.reindex(counit.at(y)).graph().to_vec()
    })?;
    DoctrineAdjunction::new(lam, rho, unit.clone(), counit.clone())
}

/// `⟨QL^op, Q, L, id, R, Qε^op, η, ε⟩` for a base adjunction `L ⊣ R`.
pub fn base_change_adjunction(
    q: &Arc<Doctrine>,
    left: &Functor,
    right: &Functor,
    unit: &NatTransformation,
    counit: &NatTransformation,
) -> Result<DoctrineAdjunction> {
    require("base adjunction", adjunction_cat(left, right, unit, counit)?)?;
    if !same_category(left.dst(), q.base()) {
        return Err(Error::Boundary("left adjoint does not land in the base of Q".into()));
    }
    let ql = Arc::new(q.pullback_along(format!("{}L", q.name()), left)?);
    base_change_on(ql, q.clone(), left, right, unit, counit)
}

/// The two factors of an adjunction through `Q L^op`.
#[derive(Clone, Debug)]
pub struct Factorization {
    /// `⟨P, QL^op, Id, λ, Id, (Pη)(ρL), id, id⟩`.
    pub vertical: DoctrineAdjunction,
    /// `⟨QL^op, Q, L, id, R, Qε, η, ε⟩`.
    pub base_change: DoctrineAdjunction,
    pub ql: Arc<Doctrine>,
}

pub fn factorize(adj: &DoctrineAdjunction) -> Result<Factorization> {
    let ql = ql_doctrine(adj)?;
    let p = adj.p().clone();
    let lam = OneArrow::vertical(p.clone(), ql.clone(), |x| adj.left.at(x).graph().to_vec())?;
    let back = OneArrow::vertical(ql.clone(), p.clone(), |x| {
        let lx = adj.left.functor().obj(x);
        let p_eta = adj.p().reindex(adj.unit.at(x));
        adj.right.at(lx).graph().iter().map(|&e| p_eta.apply(e)).collect()
    })?;
    let vertical = DoctrineAdjunction::vertical(lam, back)?;
    let base_change = base_change_on(
        ql.clone(),
        adj.q().clone(),
        adj.left.functor(),
        adj.right.functor(),
        &adj.unit,
        &adj.counit,
    )?;
    Ok(Factorization {
        vertical,
        base_change,
        ql,
    })
}

/// Differences between the recomposed factors and the original 1-arrows.
pub fn factorization_mismatches(adj: &DoctrineAdjunction, fac: &Factorization) -> Result<Violations> {
    let mut out = Vec::new();
    let left = fac.base_change.left.after(&fac.vertical.left)?;
    if left != adj.left {
        out.push(Violation::new("left composite", "⟨L,id⟩∘⟨Id,λ⟩ differs from ⟨L,λ⟩"));
    }
    let right = fac.vertical.right.after(&fac.base_change.right)?;
    if right != adj.right {
        out.push(Violation::new("right composite", "⟨Id,(Pη)(ρL)⟩∘⟨R,Qε⟩ differs from ⟨R,ρ⟩"));
    }
    Ok(out)
}

/// Surjectivity of `λ_X` onto stable elements and injectivity of `(Pη)(ρL)` on them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObjectBijectivity {
    pub object: String,
    pub surjective: bool,
    /// Stable elements outside the image of `λ_X`.
    pub unreached: Vec<String>,
    pub injective: bool,
    /// Distinct stable elements identified by `(Pη)(ρL)`.
    pub collisions: Vec<(String, String)>,
    pub stable_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor2Report {
    pub objects: Vec<ObjectBijectivity>,
    /// Commuting-square failures through `□QL^op`.
    pub squares: Violations,
    /// Points where `□` moves a stable element.
    pub box_identity_on_stable: Violations,
    /// Failures of the two adjunctions through `□QL^op`.
    pub adjunctions: Violations,
}

impl Factor2Report {
    pub fn passes(&self) -> bool {
        self.objects.iter().all(|o| o.surjective && o.injective)
            && self.squares.is_empty()
            && self.box_identity_on_stable.is_empty()
            && self.adjunctions.is_empty()
    }
}

/// The second factorization, through the stable part of `Q L^op`.
pub fn factorize2_report(adj: &DoctrineAdjunction) -> Result<Factor2Report> {
    let fac = factorize(adj)?;
    let ql = fac.ql.clone();
    let c = adj.p().base().clone();
    let op = am_modality_on(adj, &ql)?;
    let (stable, inclusion) = op.stable_subdoctrine()?;
    let members: Vec<Vec<usize>> = c.objects().map(|x| op.stable_elements(x)).collect();
    let position = |x: usize, e: usize| members[x].iter().position(|&m| m == e);

    let mut squares = Vec::new();
    let mut box_identity = Vec::new();
    for x in c.objects() {
        for &s in &members[x] {
            if op.apply(x, s) != s {
                box_identity.push(Violation::new(
                    "box identity on stable",
                    format!("{} at {}", c.object_name(x), ql.fiber(x).name(s)),
                ));
            }
        }
    }

    // λ' : P → □QL^op, the corestriction of λ.
    let mut lam_graphs = Vec::new();
    for x in c.objects() {
        let mut g = Vec::new();
        for (a, &e) in adj.left.at(x).graph().iter().enumerate() {
            match position(x, e) {
                Some(i) => g.push(i),
                None => {
                    squares.push(Violation::new(
                        "λ lands in stable elements",
                        format!("{} at {}", c.object_name(x), adj.p().fiber(x).name(a)),
                    ));
                    g.push(0);
                }
            }
        }
        lam_graphs.push(g);
    }
    if !squares.is_empty() {
        return Ok(Factor2Report {
            objects: Vec::new(),
            squares,
            box_identity_on_stable: box_identity,
            adjunctions: Vec::new(),
        });
    }
    let lam_s = OneArrow::vertical(adj.p().clone(), stable.clone(), |x| lam_graphs[x].clone())?;
    let back_s = fac.vertical.right.after(&inclusion)?;
    // ⟨Id, □'⟩ : QL^op → □QL^op
    let box_s = OneArrow::vertical(ql.clone(), stable.clone(), |x| {
        op.at(x)
            .graph()
            .iter()
            .map(|&e| position(x, e).expect("box lands in stable elements"))
            .collect()
    })?;

    let mut objects = Vec::new();
    for x in c.objects() {
        let lam = lam_s.at(x);
        let back = back_s.at(x);
        let sf = stable.fiber(x);
        objects.push(ObjectBijectivity {
            object: c.object_name(x).to_string(),
            surjective: lam.is_surjective(),
            unreached: lam.missed().into_iter().map(|s| sf.name(s).to_string()).collect(),
            injective: back.is_injective(),
            collisions: back
                .collisions()
                .into_iter()
                .map(|(a, b)| (sf.name(a).to_string(), sf.name(b).to_string()))
                .collect(),
            stable_count: sf.len(),
        });
    }

    if inclusion.after(&lam_s)? != fac.vertical.left {
        squares.push(Violation::new("square", "u∘λ' differs from λ"));
    }
    if back_s.after(&box_s)? != fac.vertical.right {
        squares.push(Violation::new("square", "(Pη)(ρL)|∘□ differs from (Pη)(ρL)"));
    }
    let l_u = OneArrow::from_graphs(stable.clone(), adj.q().clone(), adj.left.functor().clone(), |x| {
        members[x].clone()
    })?;
    if fac.base_change.left.after(&inclusion)? != l_u {
        squares.push(Violation::new("square", "⟨L,id⟩∘u differs from ⟨L,u⟩"));
    }
    let r_box = OneArrow::from_graphs(adj.q().clone(), stable.clone(), adj.right.functor().clone(), |y| {
        let ry = adj.right.functor().obj(y);
        adj.q()
            .reindex(adj.counit.at(y))
            .graph()
            .iter()
            .map(|&e| position(ry, op.apply(ry, e)).expect("stable"))
            .collect()
    })?;
    if box_s.after(&fac.base_change.right)? != r_box {
        squares.push(Violation::new("square", "□∘⟨R,Qε⟩ differs from ⟨R,□Qε⟩"));
    }

    let mut adjunctions = Vec::new();
    let first = DoctrineAdjunction::vertical(lam_s.clone(), back_s.clone())?;
    adjunctions.extend(first.check()?.into_iter().map(|v| Violation::new(format!("P⇄□QL {}", v.law), v.witness)));
    let second = DoctrineAdjunction::new(l_u.clone(), r_box.clone(), adj.unit.clone(), adj.counit.clone())?;
    adjunctions.extend(second.check()?.into_iter().map(|v| Violation::new(format!("□QL⇄Q {}", v.law), v.witness)));
    if l_u.after(&lam_s)? != adj.left || back_s.after(&r_box)? != adj.right {
        squares.push(Violation::new("square", "composite through □QL^op differs from the original"));
    }

    Ok(Factor2Report {
        objects,
        squares,
        box_identity_on_stable: box_identity,
        adjunctions,
    })
}

/// Per-object verdicts of the triviality dichotomies for a vertical adjunction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialityRow {
    pub object: String,
    pub lrl_is_l: bool,
    pub rlr_is_r: bool,
    pub lr_is_identity: bool,
    pub rho_injective: bool,
    pub lambda_surjective: bool,
    pub rl_is_identity: bool,
    pub lambda_injective: bool,
    pub rho_surjective: bool,
}

impl TrivialityRow {
    pub fn violations(&self) -> Violations {
        let mut out = Vec::new();
        if !self.lrl_is_l {
            out.push(Violation::new("λρλ = λ", self.object.clone()));
        }
        if !self.rlr_is_r {
            out.push(Violation::new("ρλρ = ρ", self.object.clone()));
        }
        if !(self.lr_is_identity == self.rho_injective && self.rho_injective == self.lambda_surjective) {
            out.push(Violation::new("λρ=id ⟺ ρ injective ⟺ λ surjective", self.object.clone()));
        }
        if !(self.rl_is_identity == self.lambda_injective && self.lambda_injective == self.rho_surjective) {
            out.push(Violation::new("ρλ=id ⟺ λ injective ⟺ ρ surjective", self.object.clone()));
        }
        out
    }
}

/// Direct enumeration of the triviality dichotomies; rejects non-adjunctions.
pub fn triviality_checks(adj: &DoctrineAdjunction) -> Result<Vec<TrivialityRow>> {
    if !adj.is_vertical() {
        return Err(Error::Invalid("triviality checks need a vertical adjunction".into()));
    }
    require("adjunction", adj.check()?)?;
    let c = adj.p().base();
    let mut rows = Vec::new();
    for x in c.objects() {
        let (lam, rho) = (adj.left.at(x), adj.right.at(x));
        let lr = lam.after(rho)?;
        let rl = rho.after(lam)?;
        rows.push(TrivialityRow {
            object: c.object_name(x).to_string(),
            lrl_is_l: lr.after(lam)? == *lam,
            rlr_is_r: rl.after(rho)? == *rho,
            lr_is_identity: lr.is_identity(),
            rho_injective: rho.is_injective(),
            lambda_surjective: lam.is_surjective(),
            rl_is_identity: rl.is_identity(),
            lambda_injective: lam.is_injective(),
            rho_surjective: rho.is_surjective(),
        });
    }
    Ok(rows)
}

/// A morphism of adjunctions `⟨F, f, G, g, θ⟩` with `θ: F R^A ⇒ R^B G`.
#[derive(Clone, Debug)]
pub struct AdjMorphism {
    src: Arc<DoctrineAdjunction>,
    dst: Arc<DoctrineAdjunction>,
    p_side: OneArrow,
    q_side: OneArrow,
    theta: NatTransformation,
}

impl AdjMorphism {
    pub fn new(
        src: Arc<DoctrineAdjunction>,
        dst: Arc<DoctrineAdjunction>,
        p_side: OneArrow,
        q_side: OneArrow,
        theta: NatTransformation,
    ) -> Result<AdjMorphism> {
        if !same_doctrine(p_side.src(), src.p())
            || !same_doctrine(p_side.dst(), dst.p())
            || !same_doctrine(q_side.src(), src.q())
            || !same_doctrine(q_side.dst(), dst.q())
        {
            return Err(Error::Boundary("morphism sides do not connect the adjunctions".into()));
        }
        let fr = p_side.functor().after(src.right.functor())?;
        let rg = dst.right.functor().after(q_side.functor())?;
        if *theta.src() != fr || *theta.dst() != rg {
            return Err(Error::Boundary("θ must go from F R^A to R^B G".into()));
        }
        Ok(AdjMorphism {
            src,
            dst,
            p_side,
            q_side,
            theta,
        })
    }

    pub fn identity(adj: Arc<DoctrineAdjunction>) -> AdjMorphism {
        let theta = NatTransformation::identity(adj.right.functor().clone());
        AdjMorphism {
            p_side: OneArrow::identity(adj.p().clone()),
            q_side: OneArrow::identity(adj.q().clone()),
            src: adj.clone(),
            dst: adj,
            theta,
        }
    }

    pub fn src(&self) -> &Arc<DoctrineAdjunction> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<DoctrineAdjunction> {
        &self.dst
    }

    pub fn p_side(&self) -> &OneArrow {
        &self.p_side
    }

    pub fn q_side(&self) -> &OneArrow {
        &self.q_side
    }

    pub fn theta(&self) -> &NatTransformation {
        &self.theta
    }

    /// All homomorphism conditions, exhaustively.
    pub fn check(&self) -> Result<Violations> {
        let mut out = Vec::new();
        for (name, arrow) in [("P side", &self.p_side), ("Q side", &self.q_side)] {
            match arrow.check() {
                Ok(vs) => out.extend(vs.into_iter().map(|v| Violation::new(format!("{name} {}", v.law), v.witness))),
                Err(e) => out.push(Violation::new(name, e.to_string())),
            }
        }
        for v in self.theta.check() {
            out.push(Violation::new(format!("θ {}", v.law), v.witness));
        }
        let (a, b) = (&self.src, &self.dst);
        let f = self.p_side.functor();
        let g = self.q_side.functor();
        let gl = g.after(a.left.functor())?;
        let lf = b.left.functor().after(f)?;
        if gl != lf {
            out.push(Violation::new("G L^A = L^B F", "functor tables differ"));
            return Ok(out);
        }
        if !out.is_empty() {
            return Ok(out);
        }
        let c_a = a.p().base();
        let c_b = b.p().base();
        for x in c_a.objects() {
            let lhs = c_b.compose(self.theta.at(a.left.functor().obj(x)), f.arr(a.unit.at(x)));
            if lhs != b.unit.at(f.obj(x)) {
                out.push(Violation::new("unit square", c_a.object_name(x).to_string()));
            }
        }
        let d_a = a.q().base();
        let d_b = b.q().base();
        for y in d_a.objects() {
            let lhs = d_b.compose(b.counit.at(g.obj(y)), b.left.functor().arr(self.theta.at(y)));
            if lhs != g.arr(a.counit.at(y)) {
                out.push(Violation::new("counit square", d_a.object_name(y).to_string()));
            }
        }
        let two = TwoArrow::new(
            self.p_side.after(&a.right)?,
            b.right.after(&self.q_side)?,
            self.theta.clone(),
        )?;
        out.extend(two.check()?.into_iter().map(|v| Violation::new(format!("θ {}", v.law), v.witness)));
        let via_g = self.q_side.after(&a.left)?;
        let via_f = b.left.after(&self.p_side)?;
        for x in c_a.objects() {
            if via_g.at(x).graph() != via_f.at(x).graph() {
                out.push(Violation::new("(gL)λ = (λF)f", c_a.object_name(x).to_string()));
            }
        }
        Ok(out)
    }

    /// The composite `self ∘ first`.
    pub fn after(&self, first: &AdjMorphism) -> Result<AdjMorphism> {
        if !Arc::ptr_eq(&first.dst, &self.src) {
            return Err(Error::Boundary("composed adjunction morphisms do not meet".into()));
        }
        let p_side = self.p_side.after(&first.p_side)?;
        let q_side = self.q_side.after(&first.q_side)?;
        // θ_Y = θ2_{G1 Y} ∘ F2(θ1_Y)
        let f2 = self.p_side.functor();
        let g1 = first.q_side.functor();
        let c = self.dst.p().base();
        let components = first
            .src
            .q()
            .base()
            .objects()
            .map(|y| c.compose(self.theta.at(g1.obj(y)), f2.arr(first.theta.at(y))))
            .collect();
        let theta = NatTransformation::new(
            p_side.functor().after(first.src.right.functor())?,
            self.dst.right.functor().after(q_side.functor())?,
            components,
        )?;
        AdjMorphism::new(first.src.clone(), self.dst.clone(), p_side, q_side, theta)
    }
}

/// A 2-cell `⟨α, β⟩` between parallel adjunction morphisms.
#[derive(Clone, Debug)]
pub struct AdjTwoCell {
    pub src: AdjMorphism,
    pub dst: AdjMorphism,
    pub alpha: TwoArrow,
    pub beta: TwoArrow,
}

impl AdjTwoCell {
    pub fn identity(m: AdjMorphism) -> AdjTwoCell {
        AdjTwoCell {
            alpha: TwoArrow::identity(m.p_side.clone()),
            beta: TwoArrow::identity(m.q_side.clone()),
            src: m.clone(),
            dst: m,
        }
    }

    pub fn check(&self) -> Result<Violations> {
        if *self.alpha.src() != self.src.p_side
            || *self.alpha.dst() != self.dst.p_side
            || *self.beta.src() != self.src.q_side
            || *self.beta.dst() != self.dst.q_side
        {
            return Err(Error::Boundary("2-cell components do not match the morphisms".into()));
        }
        let mut out = Vec::new();
        out.extend(self.alpha.check()?.into_iter().map(|v| Violation::new(format!("α {}", v.law), v.witness)));
        out.extend(self.beta.check()?.into_iter().map(|v| Violation::new(format!("β {}", v.law), v.witness)));
        let (a, b) = (&self.src.src, &self.src.dst);
        let c_a = a.p().base();
        for x in c_a.objects() {
            let lhs = b.left.functor().arr(self.alpha.theta().at(x));
            let rhs = self.beta.theta().at(a.left.functor().obj(x));
            if lhs != rhs {
                out.push(Violation::new("L^B α = β L^A", c_a.object_name(x).to_string()));
            }
        }
        let d_a = a.q().base();
        let c_b = b.p().base();
        for y in d_a.objects() {
            let lhs = c_b.compose(self.dst.theta.at(y), self.alpha.theta().at(a.right.functor().obj(y)));
            let rhs = c_b.compose(b.right.functor().arr(self.beta.theta().at(y)), self.src.theta.at(y));
            if lhs != rhs {
                out.push(Violation::new("θ'(αR^A) = (R^B β)θ", d_a.object_name(y).to_string()));
            }
        }
        Ok(out)
    }
}

/// A 1-arrow together with the operators on its ends.
#[derive(Clone, Debug)]
pub struct ModalArrow {
    pub arrow: OneArrow,
    pub source: InteriorOp,
    pub target: InteriorOp,
}

impl ModalArrow {
    pub fn check(&self) -> Result<Violations> {
        let mut out = self.arrow.check()?;
        out.extend(check_modal_one_arrow(&self.arrow, &self.source, &self.target)?);
        Ok(out)
    }
}

/// `AM(⟨F,f,G,g,θ⟩) = ⟨F, g L^A⟩` between the induced modalities.
pub fn am_functor(m: &AdjMorphism) -> Result<ModalArrow> {
    let (ql_a, source) = am_modality(&m.src)?;
    let (ql_b, target) = am_modality(&m.dst)?;
    let l_a = m.src.left.functor().clone();
    let arrow = OneArrow::from_graphs(ql_a, ql_b, m.p_side.functor().clone(), |x| {
        m.q_side.at(l_a.obj(x)).graph().to_vec()
    })?;
    Ok(ModalArrow {
        arrow,
        source,
        target,
    })
}

/// `AM(⟨α, β⟩) = α`, read between the images of the two morphisms.
pub fn am_functor_2cell(cell: &AdjTwoCell) -> Result<TwoArrow> {
    let src = am_functor(&cell.src)?;
    let dst = am_functor(&cell.dst)?;
    TwoArrow::new(src.arrow, dst.arrow, cell.alpha.theta().clone())
}

/// Downsets of a random poset on `size` points, with the points' order.
struct DownsetLattice {
    points: usize,
    below: Vec<u64>,
    downsets: Vec<u64>,
    poset: Arc<FinPoset>,
}

impl DownsetLattice {
    fn random(rng: &mut impl Rng, size: usize, prefix: &str) -> DownsetLattice {
        let mut below = vec![0u64; size];
        for j in 0..size {
            below[j] |= 1 << j;
            for i in 0..j {
                if rng.gen_bool(0.35) {
                    below[j] |= below[i];
                }
            }
        }
        let downsets: Vec<u64> = (0..1u64 << size)
            .filter(|&s| (0..size).all(|p| s >> p & 1 == 0 || below[p] & !s == 0))
            .collect();
        let ground: Vec<String> = (0..size).map(|p| format!("{prefix}{p}")).collect();
        let names = downsets.iter().map(|&s| subset_name(&ground, s)).collect();
        let poset = Arc::new(FinPoset::from_fn_trusted(names, |a, b| downsets[a] & !downsets[b] == 0));
        DownsetLattice {
            points: size,
            below,
            downsets,
            poset,
        }
    }

    fn index(&self, set: u64) -> usize {
        self.downsets.iter().position(|&d| d == set).expect("downset")
    }
}

/// A seeded random vertical adjunction over a discrete base with fibers of at most 16 elements.
///
/// Each fiber pair is a pair of downset lattices with `λ(D) = ⋁_{m∈D} h(m)` for a random
/// monotone `h`, and `ρ(q) = {m | h(m) ≤ q}`.
pub fn random_vertical_adjunction(rng: &mut impl Rng) -> Result<DoctrineAdjunction> {
    let objects = rng.gen_range(1..=2);
    let base = Arc::new(FinCategory::discrete((0..objects).map(|i| format!("X{i}")).collect())?);
    let mut p_fibers = Vec::new();
    let mut q_fibers = Vec::new();
    let mut lam_graphs = Vec::new();
    let mut rho_graphs = Vec::new();
    for _ in 0..objects {
        let (m_size, n_size) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let source = DownsetLattice::random(rng, m_size, "m");
        let target = DownsetLattice::random(rng, n_size, "n");
        let mut h = vec![0u64; source.points];
        for m in 0..source.points {
            let mut value = target.downsets[rng.gen_range(0..target.downsets.len())];
            for i in 0..m {
                if source.below[m] >> i & 1 == 1 {
                    value |= h[i];
                }
            }
            h[m] = value;
        }
        let lam: Vec<usize> = source
            .downsets
            .iter()
            .map(|&d| {
                let joined = (0..source.points)
                    .filter(|&m| d >> m & 1 == 1)
                    .fold(0u64, |acc, m| acc | h[m]);
                target.index(joined)
            })
            .collect();
        let rho: Vec<usize> = target
            .downsets
            .iter()
            .map(|&q| {
                let pre = (0..source.points)
                    .filter(|&m| h[m] & !q == 0)
                    .fold(0u64, |acc, m| acc | 1 << m);
                source.index(pre)
            })
            .collect();
        p_fibers.push(source.poset.clone());
        q_fibers.push(target.poset.clone());
        lam_graphs.push(lam);
        rho_graphs.push(rho);
    }
    let identity_graph = |fibers: &Vec<Arc<FinPoset>>, t: usize| (0..fibers[base.src(t)].len()).collect::<Vec<_>>();
    let p = Arc::new(Doctrine::from_graphs("P", base.clone(), p_fibers.clone(), |t| identity_graph(&p_fibers, t))?);
    let q = Arc::new(Doctrine::from_graphs("Q", base.clone(), q_fibers.clone(), |t| identity_graph(&q_fibers, t))?);
    let left = OneArrow::vertical(p.clone(), q.clone(), |x| lam_graphs[x].clone())?;
    let right = OneArrow::vertical(q, p, |x| rho_graphs[x].clone())?;
    DoctrineAdjunction::vertical(left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::powerset_poset;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn pw_doctrine() -> Arc<Doctrine> {
        let base = Arc::new(FinCategory::terminal());
        Arc::new(Doctrine::constant("P", base, Arc::new(powerset_poset(&names(&["a", "b"])))))
    }

    #[test]
    fn identity_adjunction_everything_trivial() {
        let adj = DoctrineAdjunction::identity(pw_doctrine());
        assert!(adj.check().unwrap().is_empty());
        assert!(vertical_modality(&adj).unwrap().is_identity());
        assert!(am_modality(&adj).unwrap().1.is_identity());
        let fac = factorize(&adj).unwrap();
        assert!(fac.vertical.left.is_identity() && fac.base_change.left.is_identity());
        assert!(factorization_mismatches(&adj, &fac).unwrap().is_empty());
        let report = factorize2_report(&adj).unwrap();
        assert!(report.passes());
        for row in triviality_checks(&adj).unwrap() {
            assert!(row.lr_is_identity && row.rl_is_identity);
        }
        let m = AdjMorphism::identity(Arc::new(adj));
        assert!(m.check().unwrap().is_empty());
        let am = am_functor(&m).unwrap();
        assert!(am.arrow.is_identity());
    }

    /// Subsets of {a,b} over the chain {}<{a}<{a,b} with λ = inclusion, ρ = largest chain element below.
    fn chain_core() -> DoctrineAdjunction {
        let p = Arc::new(Doctrine::constant(
            "C",
            Arc::new(FinCategory::terminal()),
            Arc::new(FinPoset::chain(names(&["{}", "{a}", "{a,b}"])).unwrap()),
        ));
        let q = pw_doctrine();
        // pw indices: 0={},1={a},2={b},3={a,b}
        let left = OneArrow::vertical(p.clone(), q.clone(), |_| vec![0, 1, 3]).unwrap();
        let right = OneArrow::vertical(q, p, |_| vec![0, 1, 0, 2]).unwrap();
        DoctrineAdjunction::vertical(left, right).unwrap()
    }

    #[test]
    fn chain_core_modality() {
        let adj = chain_core();
        assert!(adj.check().unwrap().is_empty());
        assert!(fiberwise_galois(&adj).unwrap().is_empty());
        let op = vertical_modality(&adj).unwrap();
        assert!(op.check().is_empty());
        assert_eq!(op.at(0).graph(), &[0, 1, 0, 3]);
        let (_, am) = am_modality(&adj).unwrap();
        assert_eq!(am.at(0).graph(), op.at(0).graph());
        let rows = triviality_checks(&adj).unwrap();
        assert!(rows[0].violations().is_empty());
        assert!(rows[0].rl_is_identity && !rows[0].lr_is_identity);
        let report = factorize2_report(&adj).unwrap();
        assert!(report.passes(), "{report:?}");
        assert_eq!(report.objects[0].stable_count, 3);
    }

    #[test]
    fn corrupted_unit_is_tagged() {
        // Non-adjoint pair: ρ too small breaks the unit inequality.
        let adj = chain_core();
        let right = OneArrow::vertical(adj.q().clone(), adj.p().clone(), |_| vec![0, 0, 0, 0]).unwrap();
        let bad = DoctrineAdjunction::vertical(adj.left().clone(), right).unwrap();
        let v = bad.check().unwrap();
        assert!(v.iter().any(|x| x.law.starts_with("(iii) unit")));
        assert!(matches!(triviality_checks(&bad), Err(Error::Laws { .. })));
    }

    #[test]
    fn random_adjunctions_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let adj = random_vertical_adjunction(&mut rng).unwrap();
            assert!(adj.check().unwrap().is_empty());
            assert!(fiberwise_galois(&adj).unwrap().is_empty());
            for x in adj.p().base().objects() {
                assert!(adj.p().fiber(x).len() <= 16 && adj.q().fiber(x).len() <= 16);
            }
            let (_, op) = am_modality(&adj).unwrap();
            assert!(op.check().is_empty());
        }
    }

    #[test]
    fn broken_theta_square_reported() {
        let adj = Arc::new(DoctrineAdjunction::identity(Arc::new(Doctrine::constant(
            "P",
            Arc::new(FinCategory::thin(names(&["a", "b"]), |x, y| x <= y).unwrap()),
            Arc::new(FinPoset::one_point("t")),
        ))));
        let base = adj.p().base().clone();
        let id = Functor::identity(base.clone());
        // constant functor at b is not a valid θ-component choice: use components a<=b at a
        let theta = NatTransformation::new(id.clone(), id, vec![base.arrow_index("a<=b").unwrap(), base.identity(1)]);
        assert!(theta.is_err() || {
            let m = AdjMorphism::new(
                adj.clone(),
                adj.clone(),
                OneArrow::identity(adj.p().clone()),
                OneArrow::identity(adj.q().clone()),
                theta.unwrap(),
            )
            .unwrap();
            let v = m.check().unwrap();
            v.iter().any(|x| x.law.contains("square") || x.law.contains("θ"))
        });
    }
}
