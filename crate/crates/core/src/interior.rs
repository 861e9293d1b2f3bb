//! Interior operators on doctrines, stable elements and modal 1-arrows.

use std::sync::Arc;

use crate::doctrine::{same_doctrine, Doctrine, OneArrow};
use crate::error::{Error, Result, Violation, Violations};
use crate::fincat::{FinCategory, Functor};
use crate::order::{FinPoset, MonotoneMap};

/// A family of endomaps `□_X` on the fibers of a doctrine.
#[derive(Clone, Debug)]
pub struct InteriorOp {
    doctrine: Arc<Doctrine>,
    boxes: Vec<MonotoneMap>,
}

impl PartialEq for InteriorOp {
    fn eq(&self, other: &Self) -> bool {
        same_doctrine(&self.doctrine, &other.doctrine)
            && self
                .boxes
                .iter()
                .zip(&other.boxes)
                .all(|(a, b)| a.graph() == b.graph())
    }
}

impl Eq for InteriorOp {}

impl InteriorOp {
    pub fn new(doctrine: Arc<Doctrine>, boxes: Vec<MonotoneMap>) -> Result<InteriorOp> {
        let c = doctrine.base();
        if boxes.len() != c.num_objects() {
            let x = boxes.len().min(c.num_objects().saturating_sub(1));
            return Err(Error::Partial(format!("box missing at `{}`", c.object_name(x))));
        }
        for x in c.objects() {
            let f = doctrine.fiber(x);
            if **boxes[x].src() != **f || **boxes[x].dst() != **f {
                return Err(Error::Boundary(format!(
                    "box at `{}` is not an endomap of the fiber",
                    c.object_name(x)
                )));
            }
        }
        Ok(InteriorOp { doctrine, boxes })
    }

    /// Builds the operator from per-object graphs.
    pub fn from_graphs(
        doctrine: Arc<Doctrine>,
        graph: impl Fn(usize) -> Vec<usize>,
    ) -> Result<InteriorOp> {
        let boxes = doctrine
            .base()
            .objects()
            .map(|x| {
                let f = doctrine.fiber(x).clone();
                MonotoneMap::new(f.clone(), f, graph(x))
            })
            .collect::<Result<Vec<_>>>()?;
        InteriorOp::new(doctrine, boxes)
    }

    pub fn identity(doctrine: Arc<Doctrine>) -> InteriorOp {
        let boxes = doctrine
            .base()
            .objects()
            .map(|x| MonotoneMap::identity(doctrine.fiber(x).clone()))
            .collect();
        InteriorOp { doctrine, boxes }
    }

    /// An operator on a bare poset, over the one-object base.
    pub fn on_poset(poset: Arc<FinPoset>, graph: Vec<usize>) -> Result<InteriorOp> {
        let base = Arc::new(FinCategory::terminal());
        let doctrine = Arc::new(Doctrine::constant("poset", base, poset));
        InteriorOp::from_graphs(doctrine, |_| graph.clone())
    }

    pub fn doctrine(&self) -> &Arc<Doctrine> {
        &self.doctrine
    }

    pub fn at(&self, x: usize) -> &MonotoneMap {
        &self.boxes[x]
    }

    pub fn apply(&self, x: usize, element: usize) -> usize {
        self.boxes[x].apply(element)
    }

    pub fn is_identity(&self) -> bool {
        self.boxes.iter().all(|b| b.is_identity())
    }

    fn witness(&self, x: usize, a: usize) -> String {
        format!(
            "{} at {}",
            self.doctrine.base().object_name(x),
            self.doctrine.fiber(x).name(a)
        )
    }

    /// Monotonicity, naturality, axiom T, axiom 4 and idempotence failures, each with a witness.
    pub fn check(&self) -> Violations {
        let d = &self.doctrine;
        let c = d.base();
        let mut out = Vec::new();
        for x in c.objects() {
            for v in self.boxes[x].check_monotone() {
                out.push(Violation::new(
                    "box monotone",
                    format!("{}: {}", c.object_name(x), v.witness),
                ));
            }
        }
        for t in c.arrow_ids() {
            let (x, y) = (c.src(t), c.dst(t));
            let p_t = d.reindex(t);
            if let Some(a) = d.fiber(y).elements().find(|&a| {
                self.boxes[x].apply(p_t.apply(a)) != p_t.apply(self.boxes[y].apply(a))
            }) {
                out.push(Violation::new(
                    "naturality",
                    format!("{} at {}", c.arrow_name(t), d.fiber(y).name(a)),
                ));
            }
        }
        for x in c.objects() {
            let f = d.fiber(x);
            let b = &self.boxes[x];
            for a in f.elements() {
                let ba = b.apply(a);
                if !f.leq(ba, a) {
                    out.push(Violation::new("axiom T", self.witness(x, a)));
                }
                if !f.leq(ba, b.apply(ba)) {
                    out.push(Violation::new("axiom 4", self.witness(x, a)));
                }
                if b.apply(ba) != ba {
                    out.push(Violation::new("idempotence", self.witness(x, a)));
                }
            }
        }
        out
    }

    /// Fixed points of `□_X`, in fiber order.
    pub fn stable_elements(&self, x: usize) -> Vec<usize> {
        let b = &self.boxes[x];
        self.doctrine
            .fiber(x)
            .elements()
            .filter(|&a| b.apply(a) == a)
            .collect()
    }

    /// The image of `□_X`, in fiber order.
    pub fn image(&self, x: usize) -> Vec<usize> {
        let mut hit = vec![false; self.doctrine.fiber(x).len()];
        for &y in self.boxes[x].graph() {
            hit[y] = true;
        }
        (0..hit.len()).filter(|&a| hit[a]).collect()
    }

    /// The doctrine `□P` of stable elements with its inclusion `⟨Id, u⟩: □P → P`.
    pub fn stable_subdoctrine(&self) -> Result<(Arc<Doctrine>, OneArrow)> {
        let d = &self.doctrine;
        let c = d.base().clone();
        let members: Vec<Vec<usize>> = c.objects().map(|x| self.stable_elements(x)).collect();
        let fibers: Vec<Arc<FinPoset>> = c
            .objects()
            .map(|x| Arc::new(d.fiber(x).suborder(&members[x])))
            .collect();
        let reindex = c
            .arrow_ids()
            .map(|t| {
                let (x, y) = (c.src(t), c.dst(t));
                d.reindex(t).restrict(
                    fibers[y].clone(),
                    &members[y],
                    fibers[x].clone(),
                    &members[x],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let stable = Arc::new(Doctrine::new(
            format!("□{}", d.name()),
            c.clone(),
            fibers,
            reindex,
        )?);
        let inclusion = OneArrow::vertical(stable.clone(), d.clone(), |x| members[x].clone())?;
        Ok((stable, inclusion))
    }
}

/// Checks `f_X ∘ □_X ≤ □'_{FX} ∘ f_X` and its stability-preservation form `□' f □ = f □`.
///
/// Disagreement between the two forms at an object is itself reported.
pub fn check_modal_one_arrow(
    arrow: &OneArrow,
    source_op: &InteriorOp,
    target_op: &InteriorOp,
) -> Result<Violations> {
    if !same_doctrine(arrow.src(), &source_op.doctrine)
        || !same_doctrine(arrow.dst(), &target_op.doctrine)
    {
        return Err(Error::Boundary("operators do not sit on the arrow's doctrines".into()));
    }
    let c = arrow.src().base();
    let functor: &Functor = arrow.functor();
    let mut out = Vec::new();
    for x in c.objects() {
        let fx = functor.obj(x);
        let f = arrow.at(x);
        let target = arrow.dst().fiber(fx);
        let mut inequality_holds = true;
        let mut equality_holds = true;
        for a in arrow.src().fiber(x).elements() {
            let f_box = f.apply(source_op.apply(x, a));
            let box_f = target_op.apply(fx, f.apply(a));
            if !target.leq(f_box, box_f) {
                inequality_holds = false;
                out.push(Violation::new(
                    "modal 1-arrow",
                    format!("{} at {}", c.object_name(x), arrow.src().fiber(x).name(a)),
                ));
            }
            if target_op.apply(fx, f_box) != f_box {
                equality_holds = false;
            }
        }
        if inequality_holds != equality_holds {
            out.push(Violation::new(
                "stability-preservation equivalence",
                c.object_name(x).to_string(),
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::powerset_poset;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn identity_operator_passes() {
        let p = Arc::new(powerset_poset(&names(&["a", "b"])));
        let op = InteriorOp::on_poset(p.clone(), (0..4).collect()).unwrap();
        assert!(op.check().is_empty());
        assert_eq!(op.stable_elements(0), vec![0, 1, 2, 3]);
        let (stable, inclusion) = op.stable_subdoctrine().unwrap();
        assert_eq!(*stable, **op.doctrine());
        assert!(inclusion.check().unwrap().is_empty());
    }

    #[test]
    fn non_deflationary_operator_fails_t() {
        let p = Arc::new(powerset_poset(&names(&["a"])));
        let op = InteriorOp::on_poset(p, vec![1, 1]).unwrap();
        let v = op.check();
        assert!(v.contains(&Violation::new("axiom T", "⋆ at {}")));
    }

    #[test]
    fn image_equals_fixed_points_for_a_valid_operator() {
        // keep only a: S ↦ S ∩ {a}
        let p = Arc::new(powerset_poset(&names(&["a", "b"])));
        let op = InteriorOp::on_poset(p, (0..4).map(|s| s & 1).collect()).unwrap();
        assert!(op.check().is_empty());
        assert_eq!(op.image(0), op.stable_elements(0));
    }

    #[test]
    fn modal_arrow_inequality_and_equivalence() {
        let p = Arc::new(powerset_poset(&names(&["a", "b"])));
        let keep_a = InteriorOp::on_poset(p.clone(), (0..4).map(|s| s & 1).collect()).unwrap();
        let ident = InteriorOp::identity(keep_a.doctrine().clone());
        let id_arrow = OneArrow::identity(keep_a.doctrine().clone());
        // from ⟨P, keep_a⟩ to ⟨P, id⟩ holds since keep_a is deflationary
        assert!(check_modal_one_arrow(&id_arrow, &keep_a, &ident).unwrap().is_empty());
        // from ⟨P, id⟩ to ⟨P, keep_a⟩ fails at {b}
        let v = check_modal_one_arrow(&id_arrow, &ident, &keep_a).unwrap();
        assert!(v.contains(&Violation::new("modal 1-arrow", "⋆ at {b}")));
        assert!(v.iter().all(|x| x.law == "modal 1-arrow"));
    }

    #[test]
    fn inclusion_is_modal_from_stable() {
        let p = Arc::new(powerset_poset(&names(&["a", "b"])));
        let keep_a = InteriorOp::on_poset(p, (0..4).map(|s| s & 1).collect()).unwrap();
        let (stable, inclusion) = keep_a.stable_subdoctrine().unwrap();
        assert_eq!(stable.fiber(0).names(), &names(&["{}", "{a}"]));
        let trivial = InteriorOp::identity(stable);
        assert!(check_modal_one_arrow(&inclusion, &trivial, &keep_a).unwrap().is_empty());
    }
}
