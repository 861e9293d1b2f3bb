//! Comonads on doctrines, Eilenberg–Moore doctrines and the comparisons with adjunctions.

use std::sync::Arc;

use serde::Serialize;

use crate::adjunction::{am_functor, am_modality, AdjMorphism, DoctrineAdjunction, ModalArrow};
use crate::doctrine::{same_doctrine, Doctrine, OneArrow, TwoArrow};
use crate::enumerate::{odometer, odometer_len};
use crate::error::{require, Error, Result, Violation, Violations};
use crate::fincat::{coalgebra_category, comonad_law_violations, CoalgebraCategory, Functor, NatTransformation};
use crate::interior::{check_modal_one_arrow, InteriorOp};
use crate::order::MonotoneMap;

/// The quadruple `⟨K, κ, μ, ν⟩` on a doctrine `P`.
#[derive(Clone, Debug)]
pub struct DoctrineComonad {
    arrow: OneArrow,
    comult: NatTransformation,
    counit: NatTransformation,
}

impl DoctrineComonad {
    pub fn new(arrow: OneArrow, comult: NatTransformation, counit: NatTransformation) -> Result<DoctrineComonad> {
        if !same_doctrine(arrow.src(), arrow.dst()) {
            return Err(Error::Boundary("comonad 1-arrow must be an endo-arrow".into()));
        }
        let k = arrow.functor();
        if *comult.src() != *k || *comult.dst() != k.after(k)? {
            return Err(Error::Boundary("μ must go from K to KK".into()));
        }
        if *counit.src() != *k || *counit.dst() != Functor::identity(k.src().clone()) {
            return Err(Error::Boundary("ν must go from K to Id".into()));
        }
        Ok(DoctrineComonad {
            arrow,
            comult,
            counit,
        })
    }

    pub fn identity(doctrine: Arc<Doctrine>) -> DoctrineComonad {
        let arrow = OneArrow::identity(doctrine);
        let id = NatTransformation::identity(arrow.functor().clone());
        DoctrineComonad {
            arrow,
            comult: id.clone(),
            counit: id,
        }
    }

    pub fn doctrine(&self) -> &Arc<Doctrine> {
        self.arrow.src()
    }

    /// `⟨K, κ⟩`.
    pub fn arrow(&self) -> &OneArrow {
        &self.arrow
    }

    pub fn functor(&self) -> &Functor {
        self.arrow.functor()
    }

    pub fn kappa(&self, x: usize) -> &MonotoneMap {
        self.arrow.at(x)
    }

    pub fn comult(&self) -> &NatTransformation {
        &self.comult
    }

    pub fn counit(&self) -> &NatTransformation {
        &self.counit
    }

    pub fn is_vertical(&self) -> bool {
        self.functor().is_identity() && self.comult.is_identity() && self.counit.is_identity()
    }

    /// Base comonad laws `(i)`, the 1-arrow `(ii)`, and the two 2-arrow inequalities `(iii)`.
    pub fn check(&self) -> Result<Violations> {
        let tag = |group: &str, v: Violation| Violation::new(format!("{group} {}", v.law), v.witness);
        let mut out: Violations = comonad_law_violations(self.functor(), &self.comult, &self.counit)?
            .into_iter()
            .map(|v| tag("(i)", v))
            .collect();
        match self.arrow.check() {
            Ok(vs) => out.extend(vs.into_iter().map(|v| tag("(ii)", v))),
            Err(e) => out.push(Violation::new("(ii) 1-arrow", e.to_string())),
        }
        if !out.is_empty() {
            return Ok(out);
        }
        let twice = self.arrow.after(&self.arrow)?;
        let cells = [
            ("(iii) comultiplication", TwoArrow::new(self.arrow.clone(), twice, self.comult.clone())?),
            (
                "(iii) counit",
                TwoArrow::new(self.arrow.clone(), OneArrow::identity(self.doctrine().clone()), self.counit.clone())?,
            ),
        ];
        for (group, cell) in cells {
            out.extend(cell.check()?.into_iter().map(|v| tag(group, v)));
        }
        Ok(out)
    }
}

/// The Eilenberg–Moore doctrine of a comonad with its forgetful 1-arrow and universal 2-arrow.
#[derive(Clone, Debug)]
pub struct EmBundle {
    pub comonad: DoctrineComonad,
    pub coalgebras: CoalgebraCategory,
    pub em: Arc<Doctrine>,
    /// `⟨U, u⟩: em → P`, an inclusion on every fiber.
    pub forgetful: OneArrow,
    /// `υ: U ⇒ K U` with `υ_⟨C,c⟩ = c`.
    pub universal: NatTransformation,
    /// Members of each EM fiber as elements of the carrier's P-fiber.
    pub members: Vec<Vec<usize>>,
    /// Failures of idempotence of `P(c)∘κ_C`, of the fixed-point description, or of the bundle laws.
    pub verification: Violations,
}

impl EmBundle {
    /// Position of a carrier element inside the EM fiber at coalgebra `o`.
    pub fn position(&self, o: usize, element: usize) -> Option<usize> {
        self.members[o].iter().position(|&m| m == element)
    }

    fn coalgebra(&self, carrier: usize, structure: usize) -> Result<usize> {
        self.coalgebras.find(carrier, structure).ok_or_else(|| {
            let c = self.comonad.doctrine().base();
            Error::Unknown(format!(
                "coalgebra ⟨{},{}⟩",
                c.object_name(carrier),
                c.arrow_name(structure)
            ))
        })
    }

    fn coalgebra_arrow(&self, src: usize, dst: usize, base: usize) -> Result<usize> {
        self.coalgebras.find_arrow(src, dst, base).ok_or_else(|| {
            Error::Unknown(format!(
                "coalgebra morphism over `{}`",
                self.comonad.doctrine().base().arrow_name(base)
            ))
        })
    }
}

/// `P(c) ∘ κ_C` at a coalgebra `⟨C, c⟩`.
fn em_endomap(comonad: &DoctrineComonad, carrier: usize, structure: usize) -> Result<MonotoneMap> {
    comonad.doctrine().reindex(structure).after(comonad.kappa(carrier))
}

pub fn em_doctrine(comonad: &DoctrineComonad) -> Result<EmBundle> {
    require("comonad", comonad.check()?)?;
    let p = comonad.doctrine();
    let coalgebras = coalgebra_category(comonad.functor(), &comonad.comult, &comonad.counit)?;
    let em_base = coalgebras.category.clone();
    let mut verification = Vec::new();
    let mut members = Vec::new();
    for o in em_base.objects() {
        let (carrier, structure) = (coalgebras.carrier[o], coalgebras.structure[o]);
        let fiber = p.fiber(carrier);
        let e = em_endomap(comonad, carrier, structure)?;
        let inside: Vec<usize> = fiber.elements().filter(|&a| fiber.leq(a, e.apply(a))).collect();
        for a in fiber.elements() {
            let ea = e.apply(a);
            let witness = || format!("{} at {}", em_base.object_name(o), fiber.name(a));
            if e.apply(ea) != ea {
                verification.push(Violation::new("P(c)κ idempotent", witness()));
            }
            if !fiber.leq(ea, a) {
                verification.push(Violation::new("P(c)κ deflationary", witness()));
            }
            if inside.contains(&a) != (ea == a) {
                verification.push(Violation::new("EM fiber = fixed points", witness()));
            }
        }
        members.push(inside);
    }
    let fibers: Vec<_> = em_base
        .objects()
        .map(|o| Arc::new(p.fiber(coalgebras.carrier[o]).suborder(&members[o])))
        .collect();
    let reindex = em_base
        .arrow_ids()
        .map(|t| {
            let (s, d) = (em_base.src(t), em_base.dst(t));
            p.reindex(coalgebras.base_arrow[t])
                .restrict(fibers[d].clone(), &members[d], fibers[s].clone(), &members[s])
                .map_err(|_| Error::Closure(format!("EM fibers not closed under `{}`", em_base.arrow_name(t))))
        })
        .collect::<Result<Vec<_>>>()?;
    let em = Arc::new(Doctrine::new(format!("{}^K", p.name()), em_base.clone(), fibers, reindex)?);
    let forgetful = OneArrow::from_graphs(em.clone(), p.clone(), coalgebras.forgetful.clone(), |o| {
        members[o].clone()
    })?;
    let ku = comonad.functor().after(&coalgebras.forgetful)?;
    let universal = NatTransformation::new(
        coalgebras.forgetful.clone(),
        ku,
        coalgebras.structure.clone(),
    )?;
    for v in universal.check() {
        verification.push(Violation::new(format!("υ {}", v.law), v.witness));
    }
    let cell = TwoArrow::new(forgetful.clone(), comonad.arrow.after(&forgetful)?, universal.clone())?;
    verification.extend(cell.check()?.into_iter().map(|v| Violation::new(format!("υ {}", v.law), v.witness)));
    verification.extend(forgetful.check()?);
    for o in em_base.objects() {
        if !forgetful.at(o).is_injective() {
            verification.push(Violation::new("u injective", em_base.object_name(o).to_string()));
        }
    }
    for x in em_base.objects() {
        for y in em_base.objects() {
            let hom = em_base.hom(x, y);
            for (i, &f) in hom.iter().enumerate() {
                if hom[..i].iter().any(|&g| coalgebras.base_arrow[g] == coalgebras.base_arrow[f]) {
                    verification.push(Violation::new("U faithful", em_base.arrow_name(f).to_string()));
                }
            }
        }
    }
    Ok(EmBundle {
        comonad: comonad.clone(),
        coalgebras,
        em,
        forgetful,
        universal,
        members,
        verification,
    })
}

/// The coherence conditions on `⟨x, ξ⟩` that make a factorization through `em` exist.
pub fn universal_data_violations(bundle: &EmBundle, x: &OneArrow, xi: &NatTransformation) -> Result<Violations> {
    let k = bundle.comonad.functor();
    let p = bundle.comonad.doctrine();
    if !same_doctrine(x.dst(), p) {
        return Err(Error::Boundary("x must land in the comonad's doctrine".into()));
    }
    if *xi.src() != *x.functor() || *xi.dst() != k.after(x.functor())? {
        return Err(Error::Boundary("ξ must go from X to K X".into()));
    }
    let c = p.base();
    let d = x.src().base();
    let mut out: Violations = xi.check().into_iter().map(|v| Violation::new(format!("ξ {}", v.law), v.witness)).collect();
    for obj in d.objects() {
        let xd = x.functor().obj(obj);
        let s = xi.at(obj);
        if c.compose(bundle.comonad.counit.at(xd), s) != c.identity(xd) {
            out.push(Violation::new("ξ counit square", d.object_name(obj).to_string()));
        }
        if c.compose(bundle.comonad.comult.at(xd), s) != c.compose(k.arr(s), s) {
            out.push(Violation::new("ξ comultiplication square", d.object_name(obj).to_string()));
        }
        let e = em_endomap(&bundle.comonad, xd, s)?;
        let fiber = p.fiber(xd);
        for beta in x.src().fiber(obj).elements() {
            let a = x.at(obj).apply(beta);
            if !fiber.leq(a, e.apply(a)) {
                out.push(Violation::new(
                    "x ≤ P(ξ)κx",
                    format!("{} at {}", d.object_name(obj), x.src().fiber(obj).name(beta)),
                ));
            }
        }
    }
    Ok(out)
}

/// The unique 1-arrow `X → em` whose composite with `⟨U,u⟩` is `x` and whose `υ`-whiskering is `ξ`.
pub fn em_universal_factor(bundle: &EmBundle, x: &OneArrow, xi: &NatTransformation) -> Result<OneArrow> {
    require("universal data", universal_data_violations(bundle, x, xi)?)?;
    let d = x.src().base();
    let objects = d
        .objects()
        .map(|obj| bundle.coalgebra(x.functor().obj(obj), xi.at(obj)))
        .collect::<Result<Vec<_>>>()?;
    let arrows = d
        .arrow_ids()
        .map(|t| bundle.coalgebra_arrow(objects[d.src(t)], objects[d.dst(t)], x.functor().arr(t)))
        .collect::<Result<Vec<_>>>()?;
    let functor = Functor::new(d.clone(), bundle.em.base().clone(), objects.clone(), arrows)?;
    OneArrow::from_graphs(x.src().clone(), bundle.em.clone(), functor, |obj| {
        x.at(obj)
            .graph()
            .iter()
            .map(|&a| bundle.position(objects[obj], a).expect("checked membership"))
            .collect()
    })
}

/// Outcome of the exhaustive search for factorizations through `em`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub candidates: u128,
    pub factorizations: usize,
    pub matches_constructed: bool,
}

/// Enumerates every functor `D → EM` with every family of fiber maps and counts those that factor `⟨x, ξ⟩`.
///
/// Refuses when the candidate count exceeds `cap`.
pub fn em_universal_uniqueness(
    bundle: &EmBundle,
    x: &OneArrow,
    xi: &NatTransformation,
    cap: u128,
) -> Result<UniquenessReport> {
    let constructed = em_universal_factor(bundle, x, xi)?;
    let d = x.src().base();
    let e = bundle.em.base();
    let n = d.num_objects();
    let fiber_maps = |assignment: &[usize]| -> u128 {
        (0..n)
            .map(|obj| {
                let exponent = u32::try_from(x.src().fiber(obj).len()).unwrap_or(u32::MAX);
                (bundle.em.fiber(assignment[obj]).len() as u128).saturating_pow(exponent)
            })
            .fold(1u128, u128::saturating_mul)
    };
    let arrow_choices = |assignment: &[usize]| -> u128 {
        d.arrow_ids()
            .map(|t| e.hom(assignment[d.src(t)], assignment[d.dst(t)]).len() as u128)
            .fold(1u128, u128::saturating_mul)
    };
    let radices = vec![e.num_objects(); n];
    let assignment_count = odometer_len(&radices);
    if assignment_count > cap {
        return Err(Error::TooLarge {
            what: "object assignments".into(),
            needed: assignment_count,
            cap,
        });
    }
    let assignments = odometer(&radices);
    let mut candidates: u128 = 0;
    for a in &assignments {
        candidates = candidates.saturating_add(arrow_choices(a).saturating_mul(fiber_maps(a)));
    }
    if candidates > cap {
        return Err(Error::TooLarge {
            what: "factorization candidates".into(),
            needed: candidates,
            cap,
        });
    }
    let mut factorizations = 0;
    let mut matches_constructed = false;
    for objects in &assignments {
        let hom_lists: Vec<&[usize]> = d
            .arrow_ids()
            .map(|t| e.hom(objects[d.src(t)], objects[d.dst(t)]))
            .collect();
        let hom_sizes: Vec<usize> = hom_lists.iter().map(|h| h.len()).collect();
        if hom_sizes.contains(&0) {
            continue;
        }
        for arrow_pick in odometer(&hom_sizes) {
            let arrows: Vec<usize> = arrow_pick.iter().enumerate().map(|(t, &i)| hom_lists[t][i]).collect();
            let Ok(functor) = Functor::new(d.clone(), e.clone(), objects.clone(), arrows) else {
                continue;
            };
            if !functor.check().is_empty() {
                continue;
            }
            let mut slots = Vec::new();
            for obj in 0..n {
                for _ in x.src().fiber(obj).elements() {
                    slots.push(bundle.em.fiber(objects[obj]).len());
                }
            }
            for values in odometer(&slots) {
                let mut offset = 0;
                let graphs: Vec<Vec<usize>> = (0..n)
                    .map(|obj| {
                        let len = x.src().fiber(obj).len();
                        let g = values[offset..offset + len].to_vec();
                        offset += len;
                        g
                    })
                    .collect();
                let Ok(candidate) =
                    OneArrow::from_graphs(x.src().clone(), bundle.em.clone(), functor.clone(), |obj| graphs[obj].clone())
                else {
                    continue;
                };
                if !candidate.check().map(|v| v.is_empty()).unwrap_or(false) {
                    continue;
                }
                if bundle.forgetful.after(&candidate)? != *x {
                    continue;
                }
                let whiskered = (0..n).all(|obj| bundle.coalgebras.structure[objects[obj]] == xi.at(obj));
                if !whiskered {
                    continue;
                }
                factorizations += 1;
                if candidate == constructed {
                    matches_constructed = true;
                }
            }
        }
    }
    Ok(UniquenessReport {
        candidates,
        factorizations,
        matches_constructed,
    })
}

/// `⟨em, P, U, u, K̂, κ, υ, ν⟩` with the cofree coalgebra `K̂X = ⟨KX, μ_X⟩`.
pub fn em_adjunction(bundle: &EmBundle) -> Result<DoctrineAdjunction> {
    let cmd = &bundle.comonad;
    let p = cmd.doctrine();
    let c = p.base();
    let k = cmd.functor();
    let cofree = c
        .objects()
        .map(|x| bundle.coalgebra(k.obj(x), cmd.comult.at(x)))
        .collect::<Result<Vec<_>>>()?;
    let cofree_arrows = c
        .arrow_ids()
        .map(|t| bundle.coalgebra_arrow(cofree[c.src(t)], cofree[c.dst(t)], k.arr(t)))
        .collect::<Result<Vec<_>>>()?;
    let k_hat = Functor::new(c.clone(), bundle.em.base().clone(), cofree.clone(), cofree_arrows)?;
    let mut graphs = Vec::new();
    for x in c.objects() {
        let g = cmd
            .kappa(x)
            .graph()
            .iter()
            .map(|&a| bundle.position(cofree[x], a))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Closure(format!("κ at `{}` leaves the cofree EM fiber", c.object_name(x))))?;
        graphs.push(g);
    }
    let right = OneArrow::from_graphs(p.clone(), bundle.em.clone(), k_hat.clone(), |x| graphs[x].clone())?;
    let em_base = bundle.em.base();
    let unit_components = em_base
        .objects()
        .map(|o| {
            let carrier = bundle.coalgebras.carrier[o];
            bundle.coalgebra_arrow(o, cofree[carrier], bundle.coalgebras.structure[o])
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = NatTransformation::new(
        Functor::identity(em_base.clone()),
        k_hat.after(&bundle.coalgebras.forgetful)?,
        unit_components,
    )?;
    DoctrineAdjunction::new(bundle.forgetful.clone(), right, unit, cmd.counit.clone())
}

/// `□^K_⟨X,c⟩ = P(c) ∘ κ_X` on the doctrine `P U^op` over the coalgebras.
pub fn cm_modality(bundle: &EmBundle) -> Result<(Arc<Doctrine>, InteriorOp)> {
    let cmd = &bundle.comonad;
    let pu = Arc::new(
        cmd.doctrine()
            .pullback_along(format!("{}U", cmd.doctrine().name()), &bundle.coalgebras.forgetful)?,
    );
    let op = InteriorOp::from_graphs(pu.clone(), |o| {
        em_endomap(cmd, bundle.coalgebras.carrier[o], bundle.coalgebras.structure[o])
            .expect("endomap")
            .graph()
            .to_vec()
    })?;
    Ok((pu, op))
}

/// Objectwise table differences between `cm_modality` and `am_modality ∘ em_adjunction`.
pub fn cm_am_mismatches(bundle: &EmBundle) -> Result<Violations> {
    let (_, cm) = cm_modality(bundle)?;
    let (_, am) = am_modality(&em_adjunction(bundle)?)?;
    let base = bundle.em.base();
    Ok(base
        .objects()
        .filter(|&o| cm.at(o).graph() != am.at(o).graph())
        .map(|o| Violation::new("□^K = AM(EM adjunction)", base.object_name(o).to_string()))
        .collect())
}

/// `Cmd(A) = ⟨LR, (λR)ρ, LηR, ε⟩` on `Q`.
pub fn cmd_of_adjunction(adj: &DoctrineAdjunction) -> Result<DoctrineComonad> {
    let arrow = adj.left().after(adj.right())?;
    let l = adj.left().functor();
    let r = adj.right().functor();
    let lr = arrow.functor().clone();
    let d = adj.q().base();
    let comult = NatTransformation::new(
        lr.clone(),
        lr.after(&lr)?,
        d.objects().map(|y| l.arr(adj.unit().at(r.obj(y)))).collect(),
    )?;
    DoctrineComonad::new(arrow, comult, adj.counit().clone())
}

/// `K X = ⟨LX, Lη_X⟩`, `k = λ`: the comparison from `P` into the EM doctrine of `Cmd(A)`.
///
/// `bundle` must be the EM bundle of `cmd_of_adjunction(adj)`.
pub fn comparison_arrow(adj: &DoctrineAdjunction, bundle: &EmBundle) -> Result<OneArrow> {
    let c = adj.p().base();
    let l = adj.left().functor();
    let objects = c
        .objects()
        .map(|x| bundle.coalgebra(l.obj(x), l.arr(adj.unit().at(x))))
        .collect::<Result<Vec<_>>>()?;
    let arrows = c
        .arrow_ids()
        .map(|t| bundle.coalgebra_arrow(objects[c.src(t)], objects[c.dst(t)], l.arr(t)))
        .collect::<Result<Vec<_>>>()?;
    let functor = Functor::new(c.clone(), bundle.em.base().clone(), objects.clone(), arrows)?;
    let mut graphs = Vec::new();
    for x in c.objects() {
        let lam = adj.left().at(x);
        let back = lam.after(&adj.p().reindex(adj.unit().at(x)).after(adj.right().at(l.obj(x)))?)?;
        let chain = back.after(lam)?;
        let fiber = adj.q().fiber(l.obj(x));
        let mut g = Vec::new();
        for a in adj.p().fiber(x).elements() {
            if !fiber.leq(lam.apply(a), chain.apply(a)) {
                return Err(Error::Closure(format!(
                    "λ ≤ λ P(η) ρL λ fails at `{}` on {}",
                    c.object_name(x),
                    adj.p().fiber(x).name(a)
                )));
            }
            g.push(bundle.position(objects[x], lam.apply(a)).ok_or_else(|| {
                Error::Closure(format!("λ at `{}` leaves the EM fiber", c.object_name(x)))
            })?);
        }
        graphs.push(g);
    }
    OneArrow::from_graphs(adj.p().clone(), bundle.em.clone(), functor, |x| graphs[x].clone())
}

/// Table comparison of `□^A` with `□^K K`, and the modality check of `⟨K, id⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub table_mismatches: Violations,
    pub modal_arrow: Violations,
}

impl ComparisonReport {
    pub fn passes(&self) -> bool {
        self.table_mismatches.is_empty() && self.modal_arrow.is_empty()
    }
}

pub fn modality_comparison_check(adj: &DoctrineAdjunction) -> Result<ComparisonReport> {
    let (ql, box_a) = am_modality(adj)?;
    let cmd = cmd_of_adjunction(adj)?;
    let bundle = em_doctrine(&cmd)?;
    let comparison = comparison_arrow(adj, &bundle)?;
    let (qu, box_k) = cm_modality(&bundle)?;
    let c = adj.p().base();
    let kf = comparison.functor();
    let table_mismatches = c
        .objects()
        .filter(|&x| box_a.at(x).graph() != box_k.at(kf.obj(x)).graph())
        .map(|x| Violation::new("□^A = □^K K", c.object_name(x).to_string()))
        .collect();
    let arrow = OneArrow::from_graphs(ql.clone(), qu, kf.clone(), |x| ql.fiber(x).elements().collect())?;
    let mut modal_arrow = arrow.check()?;
    modal_arrow.extend(check_modal_one_arrow(&arrow, &box_a, &box_k)?);
    Ok(ComparisonReport {
        table_mismatches,
        modal_arrow,
    })
}

/// `MC(⟨P, □⟩) = ⟨P, Id, □, id, id⟩`.
pub fn mc(op: &InteriorOp) -> Result<DoctrineComonad> {
    let p = op.doctrine().clone();
    let arrow = OneArrow::vertical(p.clone(), p.clone(), |x| op.at(x).graph().to_vec())?;
    let id = NatTransformation::identity(Functor::identity(p.base().clone()));
    DoctrineComonad::new(arrow, id.clone(), id)
}

/// `MA(⟨P, □⟩)`: the inclusion `⟨Id, u⟩: □P → P` left adjoint to the corestriction `⟨Id, □⟩`.
pub fn ma(op: &InteriorOp) -> Result<DoctrineAdjunction> {
    let (stable, inclusion) = op.stable_subdoctrine()?;
    let p = op.doctrine().clone();
    let c = p.base().clone();
    let members: Vec<Vec<usize>> = c.objects().map(|x| op.stable_elements(x)).collect();
    let corestriction = OneArrow::vertical(p, stable, |x| {
        op.at(x)
            .graph()
            .iter()
            .map(|&b| members[x].iter().position(|&m| m == b).expect("image of □ is stable"))
            .collect()
    })?;
    DoctrineAdjunction::vertical(inclusion, corestriction)
}

/// Differences between `ma(op)` and `em_adjunction(mc(op))` under the identification of coalgebras with objects.
pub fn ma_em_mismatches(op: &InteriorOp) -> Result<Violations> {
    let direct = ma(op)?;
    let bundle = em_doctrine(&mc(op)?)?;
    let em_adj = em_adjunction(&bundle)?;
    let c = op.doctrine().base();
    let mut out = Vec::new();
    if bundle.em.base().num_objects() != c.num_objects() {
        out.push(Violation::new("coalgebras of MC", "not one per object"));
        return Ok(out);
    }
    for x in c.objects() {
        let o = bundle.coalgebra(x, c.identity(x))?;
        let name = c.object_name(x).to_string();
        if direct.p().fiber(x).names() != bundle.em.fiber(o).names() {
            out.push(Violation::new("EM fiber = stable elements", name.clone()));
        }
        if direct.left().at(x).graph() != em_adj.left().at(o).graph() {
            out.push(Violation::new("inclusion = forgetful", name.clone()));
        }
        if direct.right().at(x).graph() != em_adj.right().at(x).graph() {
            out.push(Violation::new("□ = cofree", name));
        }
    }
    Ok(out)
}

/// Triangle-law verdicts for the local adjunction `MA ⊣ AM`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalAdjunctionReport {
    /// `∇_A` as a morphism `MA(AM(A)) → A`.
    pub counit_morphism: Violations,
    /// `AM(∇_A)` against the identity on `AM(A)`.
    pub am_of_counit: Violations,
}

impl LocalAdjunctionReport {
    pub fn passes(&self) -> bool {
        self.counit_morphism.is_empty() && self.am_of_counit.is_empty()
    }
}

/// `∇_A = ⟨Id_C, (Pη)(ρL), L, id, η⟩: MA(AM(A)) → A`.
pub fn local_counit(adj: &Arc<DoctrineAdjunction>) -> Result<AdjMorphism> {
    let (ql, op) = am_modality(adj)?;
    let modal = Arc::new(ma(&op)?);
    let c = adj.p().base();
    let members: Vec<Vec<usize>> = c.objects().map(|x| op.stable_elements(x)).collect();
    let l = adj.left().functor();
    let p_side = OneArrow::vertical(modal.p().clone(), adj.p().clone(), |x| {
        let back = adj.p().reindex(adj.unit().at(x)).after(adj.right().at(l.obj(x))).expect("composable");
        members[x].iter().map(|&s| back.apply(s)).collect()
    })?;
    let q_side = OneArrow::from_graphs(ql.clone(), adj.q().clone(), l.clone(), |x| ql.fiber(x).elements().collect())?;
    AdjMorphism::new(modal, adj.clone(), p_side, q_side, adj.unit().clone())
}

pub fn local_adjunction_checks(adj: &Arc<DoctrineAdjunction>) -> Result<LocalAdjunctionReport> {
    let nabla = local_counit(adj)?;
    let counit_morphism = nabla.check()?;
    let image = am_functor(&nabla)?;
    let mut am_of_counit = Vec::new();
    if !image.arrow.is_identity() {
        am_of_counit.push(Violation::new("AM(∇) identity", "fiber maps or functor are not identities"));
    }
    let c = adj.p().base();
    for x in c.objects() {
        if image.source.at(x).graph() != image.target.at(x).graph() {
            am_of_counit.push(Violation::new("AM(MA(AM(A))) = AM(A)", c.object_name(x).to_string()));
        }
    }
    Ok(LocalAdjunctionReport {
        counit_morphism,
        am_of_counit,
    })
}

/// `∇` at `MA(⟨P, □⟩)` must be the identity morphism.
pub fn local_adjunction_checks_modal(op: &InteriorOp) -> Result<Violations> {
    let adj = Arc::new(ma(op)?);
    let nabla = local_counit(&adj)?;
    let mut out = nabla.check()?;
    let c = op.doctrine().base();
    for x in c.objects() {
        let name = c.object_name(x).to_string();
        if nabla.p_side().at(x).src().names() != nabla.p_side().at(x).dst().names() || !nabla.p_side().at(x).is_identity() {
            out.push(Violation::new("∇ identity on □P", name.clone()));
        }
        if !nabla.q_side().at(x).is_identity() {
            out.push(Violation::new("∇ identity on P", name));
        }
    }
    if !nabla.p_side().functor().is_identity() || !nabla.q_side().functor().is_identity() || !nabla.theta().is_identity() {
        out.push(Violation::new("∇ identity", "functor or θ part"));
    }
    Ok(out)
}

/// A comonad morphism `⟨⟨F, f⟩, θ⟩` with `θ: F K ⇒ J F`.
#[derive(Clone, Debug)]
pub struct CmdMorphism {
    pub src: Arc<DoctrineComonad>,
    pub dst: Arc<DoctrineComonad>,
    pub arrow: OneArrow,
    pub theta: NatTransformation,
}

impl CmdMorphism {
    pub fn new(
        src: Arc<DoctrineComonad>,
        dst: Arc<DoctrineComonad>,
        arrow: OneArrow,
        theta: NatTransformation,
    ) -> Result<CmdMorphism> {
        if !same_doctrine(arrow.src(), src.doctrine()) || !same_doctrine(arrow.dst(), dst.doctrine()) {
            return Err(Error::Boundary("1-arrow does not connect the comonads".into()));
        }
        let fk = arrow.functor().after(src.functor())?;
        let jf = dst.functor().after(arrow.functor())?;
        if *theta.src() != fk || *theta.dst() != jf {
            return Err(Error::Boundary("θ must go from FK to JF".into()));
        }
        Ok(CmdMorphism {
            src,
            dst,
            arrow,
            theta,
        })
    }

    pub fn identity(comonad: Arc<DoctrineComonad>) -> CmdMorphism {
        let theta = NatTransformation::identity(comonad.functor().clone());
        CmdMorphism {
            arrow: OneArrow::identity(comonad.doctrine().clone()),
            src: comonad.clone(),
            dst: comonad,
            theta,
        }
    }

    pub fn check(&self) -> Result<Violations> {
        let mut out: Violations = self.arrow.check()?;
        for v in self.theta.check() {
            out.push(Violation::new(format!("θ {}", v.law), v.witness));
        }
        if !out.is_empty() {
            return Ok(out);
        }
        let (k, j) = (&self.src, &self.dst);
        let f = self.arrow.functor();
        let cell = TwoArrow::new(
            self.arrow.after(&k.arrow)?,
            j.arrow.after(&self.arrow)?,
            self.theta.clone(),
        )?;
        out.extend(cell.check()?.into_iter().map(|v| Violation::new(format!("θ {}", v.law), v.witness)));
        let c = k.doctrine().base();
        let e = j.doctrine().base();
        for x in c.objects() {
            let theta = self.theta.at(x);
            if e.compose(j.counit.at(f.obj(x)), theta) != f.arr(k.counit.at(x)) {
                out.push(Violation::new("counit diagram", c.object_name(x).to_string()));
            }
            let lhs = e.compose(j.comult.at(f.obj(x)), theta);
            let rhs = e.compose(
                j.functor().arr(theta),
                e.compose(self.theta.at(k.functor().obj(x)), f.arr(k.comult.at(x))),
            );
            if lhs != rhs {
                out.push(Violation::new("comultiplication diagram", c.object_name(x).to_string()));
            }
        }
        Ok(out)
    }
}

/// A 2-cell `α` between parallel comonad morphisms, requiring `(Jα)·θ = θ'·(αK)`.
#[derive(Clone, Debug)]
pub struct CmdTwoCell {
    pub src: CmdMorphism,
    pub dst: CmdMorphism,
    pub alpha: TwoArrow,
}

impl CmdTwoCell {
    pub fn check(&self) -> Result<Violations> {
        if *self.alpha.src() != self.src.arrow || *self.alpha.dst() != self.dst.arrow {
            return Err(Error::Boundary("α does not connect the morphisms' 1-arrows".into()));
        }
        let mut out = self.alpha.check()?;
        let (k, j) = (&self.src.src, &self.src.dst);
        let c = k.doctrine().base();
        let e = j.doctrine().base();
        let alpha = self.alpha.theta();
        for x in c.objects() {
            let lhs = e.compose(j.functor().arr(alpha.at(x)), self.src.theta.at(x));
            let rhs = e.compose(self.dst.theta.at(x), alpha.at(k.functor().obj(x)));
            if lhs != rhs {
                out.push(Violation::new("(Jα)θ = θ'(αK)", c.object_name(x).to_string()));
            }
        }
        Ok(out)
    }
}

/// `MC(⟨F, f⟩) = ⟨F, f, id⟩` between the vertical comonads of the end operators.
pub fn mc_morphism(modal: &ModalArrow) -> Result<CmdMorphism> {
    let src = Arc::new(mc(&modal.source)?);
    let dst = Arc::new(mc(&modal.target)?);
    let theta = NatTransformation::identity(modal.arrow.functor().clone());
    CmdMorphism::new(src, dst, modal.arrow.clone(), theta)
}

/// Reads a morphism between vertical comonads with identity `θ` back as a modal 1-arrow.
pub fn modal_of_cmd_morphism(m: &CmdMorphism) -> Result<ModalArrow> {
    if !m.src.is_vertical() || !m.dst.is_vertical() || !m.theta.is_identity() {
        return Err(Error::Invalid("only morphisms between vertical comonads with identity θ are modal 1-arrows".into()));
    }
    let as_op = |k: &DoctrineComonad| {
        InteriorOp::from_graphs(k.doctrine().clone(), |x| k.kappa(x).graph().to_vec())
    };
    Ok(ModalArrow {
        arrow: m.arrow.clone(),
        source: as_op(&m.src)?,
        target: as_op(&m.dst)?,
    })
}
