//! Doctrines over finite bases, their 1-arrows and lax 2-arrows.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{require, Error, Result, Violation, Violations};
use crate::fincat::{same_category, FinCategory, Functor, NatTransformation};
use crate::order::{same_poset, FinPoset, MonotoneMap};

/// A contravariant assignment of finite posets to the objects of a finite base.
///
/// `reindex(t)` for `t: X → Y` maps `fiber(Y)` to `fiber(X)`.
#[derive(Clone, Debug)]
pub struct Doctrine {
    name: String,
    base: Arc<FinCategory>,
    fibers: Vec<Arc<FinPoset>>,
    reindex: Vec<MonotoneMap>,
}

impl PartialEq for Doctrine {
    fn eq(&self, other: &Self) -> bool {
        same_category(&self.base, &other.base)
            && self.fibers.len() == other.fibers.len()
            && self
                .fibers
                .iter()
                .zip(&other.fibers)
                .all(|(a, b)| same_poset(a, b))
            && self
                .reindex
                .iter()
                .zip(&other.reindex)
                .all(|(a, b)| a.graph() == b.graph())
    }
}

impl Eq for Doctrine {}

/// Pointer equality first, structural equality otherwise.
pub fn same_doctrine(a: &Arc<Doctrine>, b: &Arc<Doctrine>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Doctrine {
    pub fn new(
        name: impl Into<String>,
        base: Arc<FinCategory>,
        fibers: Vec<Arc<FinPoset>>,
        reindex: Vec<MonotoneMap>,
    ) -> Result<Doctrine> {
        if fibers.len() != base.num_objects() {
            return Err(Error::Partial(format!(
                "fiber missing at `{}`",
                base.object_name(fibers.len().min(base.num_objects().saturating_sub(1)))
            )));
        }
        if reindex.len() != base.num_arrows() {
            return Err(Error::Partial(format!(
                "reindexing missing along `{}`",
                base.arrow_name(reindex.len().min(base.num_arrows().saturating_sub(1)))
            )));
        }
        for t in base.arrow_ids() {
            let map = &reindex[t];
            if !same_poset(map.src(), &fibers[base.dst(t)])
                || !same_poset(map.dst(), &fibers[base.src(t)])
            {
                return Err(Error::Boundary(format!(
                    "reindexing along `{}` has the wrong fibers",
                    base.arrow_name(t)
                )));
            }
        }
        Ok(Doctrine {
            name: name.into(),
            base,
            fibers,
            reindex,
        })
    }

    /// Builds a doctrine from reindexing graphs given per arrow.
    pub fn from_graphs(
        name: impl Into<String>,
        base: Arc<FinCategory>,
        fibers: Vec<Arc<FinPoset>>,
        graph: impl Fn(usize) -> Vec<usize>,
    ) -> Result<Doctrine> {
        let reindex = base
            .arrow_ids()
            .map(|t| {
                MonotoneMap::new(
                    fibers[base.dst(t)].clone(),
                    fibers[base.src(t)].clone(),
                    graph(t),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Doctrine::new(name, base, fibers, reindex)
    }

    /// Every fiber `poset`, every reindexing the identity.
    pub fn constant(name: impl Into<String>, base: Arc<FinCategory>, poset: Arc<FinPoset>) -> Doctrine {
        let fibers = vec![poset.clone(); base.num_objects()];
        let reindex = base
            .arrow_ids()
            .map(|_| MonotoneMap::identity(poset.clone()))
            .collect();
        Doctrine {
            name: name.into(),
            base,
            fibers,
            reindex,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Doctrine {
        self.name = name.into();
        self
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn fiber(&self, x: usize) -> &Arc<FinPoset> {
        &self.fibers[x]
    }

    pub fn reindex(&self, t: usize) -> &MonotoneMap {
        &self.reindex[t]
    }

    /// Total number of fiber elements.
    pub fn size(&self) -> usize {
        self.fibers.iter().map(|f| f.len()).sum()
    }

    /// Monotonicity, identity and contravariant composition failures.
    pub fn check(&self) -> Violations {
        let c = &self.base;
        let mut out = Vec::new();
        for t in c.arrow_ids() {
            for v in self.reindex[t].check_monotone() {
                out.push(Violation::new(
                    "reindexing monotone",
                    format!("{}: {}", c.arrow_name(t), v.witness),
                ));
            }
        }
        for x in c.objects() {
            if !self.reindex[c.identity(x)].is_identity() {
                out.push(Violation::new("reindexing identity", c.object_name(x).to_string()));
            }
        }
        for (g, f) in c.composable_pairs() {
            let whole = &self.reindex[c.compose(g, f)];
            let (pf, pg) = (&self.reindex[f], &self.reindex[g]);
            let differs = whole
                .src()
                .elements()
                .any(|a| whole.apply(a) != pf.apply(pg.apply(a)));
            if differs {
                out.push(Violation::new(
                    "reindexing composition",
                    format!("({}, {})", c.arrow_name(g), c.arrow_name(f)),
                ));
            }
        }
        out
    }

    /// The doctrine `P F^op` over the source of `functor`.
    pub fn pullback_along(&self, name: impl Into<String>, functor: &Functor) -> Result<Doctrine> {
        if !same_category(functor.dst(), &self.base) {
            return Err(Error::Boundary("functor does not land in the base".into()));
        }
        let c = functor.src();
        let fibers = c.objects().map(|x| self.fibers[functor.obj(x)].clone()).collect();
        let reindex = c
            .arrow_ids()
            .map(|t| self.reindex[functor.arr(t)].clone())
            .collect();
        Ok(Doctrine {
            name: name.into(),
            base: c.clone(),
            fibers,
            reindex,
        })
    }
}

/// A 1-arrow `⟨F, f⟩: P → Q` with `f_X: P X → Q(F X)`.
#[derive(Clone, Debug)]
pub struct OneArrow {
    src: Arc<Doctrine>,
    dst: Arc<Doctrine>,
    functor: Functor,
    maps: Vec<MonotoneMap>,
}

impl PartialEq for OneArrow {
    fn eq(&self, other: &Self) -> bool {
        self.functor == other.functor
            && self
                .maps
                .iter()
                .zip(&other.maps)
                .all(|(a, b)| a.graph() == b.graph())
            && same_doctrine(&self.src, &other.src)
            && same_doctrine(&self.dst, &other.dst)
    }
}

impl Eq for OneArrow {}

impl OneArrow {
    pub fn new(
        src: Arc<Doctrine>,
        dst: Arc<Doctrine>,
        functor: Functor,
        maps: Vec<MonotoneMap>,
    ) -> Result<OneArrow> {
        if !same_category(functor.src(), src.base()) || !same_category(functor.dst(), dst.base()) {
            return Err(Error::Boundary("functor part does not match the bases".into()));
        }
        if maps.len() != src.base().num_objects() {
            return Err(Error::Partial("fiber map missing at some object".into()));
        }
        for x in src.base().objects() {
            if !same_poset(maps[x].src(), src.fiber(x))
                || !same_poset(maps[x].dst(), dst.fiber(functor.obj(x)))
            {
                return Err(Error::Boundary(format!(
                    "fiber map at `{}` has the wrong fibers",
                    src.base().object_name(x)
                )));
            }
        }
        Ok(OneArrow {
            src,
            dst,
            functor,
            maps,
        })
    }

    /// Builds the fiber maps from graphs given per source object.
    pub fn from_graphs(
        src: Arc<Doctrine>,
        dst: Arc<Doctrine>,
        functor: Functor,
        graph: impl Fn(usize) -> Vec<usize>,
    ) -> Result<OneArrow> {
        let maps = src
            .base()
            .objects()
            .map(|x| {
                MonotoneMap::new(
                    src.fiber(x).clone(),
                    dst.fiber(functor.obj(x)).clone(),
                    graph(x),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        OneArrow::new(src, dst, functor, maps)
    }

    /// A 1-arrow with identity functor part over a shared base.
    pub fn vertical(
        src: Arc<Doctrine>,
        dst: Arc<Doctrine>,
        graph: impl Fn(usize) -> Vec<usize>,
    ) -> Result<OneArrow> {
        let functor = Functor::identity(src.base().clone());
        OneArrow::from_graphs(src, dst, functor, graph)
    }

    pub fn identity(doctrine: Arc<Doctrine>) -> OneArrow {
        let maps = doctrine
            .base()
            .objects()
            .map(|x| MonotoneMap::identity(doctrine.fiber(x).clone()))
            .collect();
        OneArrow {
            functor: Functor::identity(doctrine.base().clone()),
            src: doctrine.clone(),
            dst: doctrine,
            maps,
        }
    }

    pub fn src(&self) -> &Arc<Doctrine> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<Doctrine> {
        &self.dst
    }

    pub fn functor(&self) -> &Functor {
        &self.functor
    }

    pub fn at(&self, x: usize) -> &MonotoneMap {
        &self.maps[x]
    }

    pub fn is_identity(&self) -> bool {
        self.functor.is_identity() && self.maps.iter().all(|m| m.is_identity())
    }

    /// Monotonicity and naturality failures; an invalid functor part is an error.
    pub fn check(&self) -> Result<Violations> {
        require("functor part", self.functor.check())?;
        let c = self.src.base();
        let mut out = Vec::new();
        for x in c.objects() {
            for v in self.maps[x].check_monotone() {
                out.push(Violation::new(
                    "fiber map monotone",
                    format!("{}: {}", c.object_name(x), v.witness),
                ));
            }
        }
        for t in c.arrow_ids() {
            let (x, y) = (c.src(t), c.dst(t));
            let p_t = self.src.reindex(t);
            let q_ft = self.dst.reindex(self.functor.arr(t));
            if let Some(a) = p_t
                .src()
                .elements()
                .find(|&a| self.maps[x].apply(p_t.apply(a)) != q_ft.apply(self.maps[y].apply(a)))
            {
                out.push(Violation::new(
                    "naturality",
                    format!("{} at {}", c.arrow_name(t), self.src.fiber(y).name(a)),
                ));
            }
        }
        Ok(out)
    }

    /// The composite `self ∘ first` = `⟨F G, (f G) · g⟩`.
    pub fn after(&self, first: &OneArrow) -> Result<OneArrow> {
        if !same_doctrine(&first.dst, &self.src) {
            return Err(Error::Boundary("composed 1-arrows do not meet".into()));
        }
        let functor = self.functor.after(&first.functor)?;
        let maps = first
            .src
            .base()
            .objects()
            .map(|x| self.maps[first.functor.obj(x)].after(&first.maps[x]))
            .collect::<Result<Vec<_>>>()?;
        Ok(OneArrow {
            src: first.src.clone(),
            dst: self.dst.clone(),
            functor,
            maps,
        })
    }
}

/// A lax 2-arrow `θ: ⟨F,f⟩ ⇒ ⟨F',f'⟩` requiring `f_X ≤ Q(θ_X) ∘ f'_X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoArrow {
    src: OneArrow,
    dst: OneArrow,
    theta: NatTransformation,
}

impl TwoArrow {
    pub fn new(src: OneArrow, dst: OneArrow, theta: NatTransformation) -> Result<TwoArrow> {
        if !same_doctrine(&src.src, &dst.src) || !same_doctrine(&src.dst, &dst.dst) {
            return Err(Error::Boundary("2-arrow between 1-arrows with different ends".into()));
        }
        if *theta.src() != src.functor || *theta.dst() != dst.functor {
            return Err(Error::Boundary(
                "transformation does not connect the functor parts".into(),
            ));
        }
        Ok(TwoArrow { src, dst, theta })
    }

    pub fn identity(arrow: OneArrow) -> TwoArrow {
        TwoArrow {
            theta: NatTransformation::identity(arrow.functor.clone()),
            src: arrow.clone(),
            dst: arrow,
        }
    }

    pub fn src(&self) -> &OneArrow {
        &self.src
    }

    pub fn dst(&self) -> &OneArrow {
        &self.dst
    }

    pub fn theta(&self) -> &NatTransformation {
        &self.theta
    }

    /// Failing `(object, element)` pairs of the lax inequality; a non-natural θ is an error.
    pub fn check(&self) -> Result<Violations> {
        require("2-arrow transformation", self.theta.check())?;
        let c = self.src.src.base();
        let q = &self.src.dst;
        let mut out = Vec::new();
        for x in c.objects() {
            let q_theta = q.reindex(self.theta.at(x));
            let target = q.fiber(self.src.functor.obj(x));
            for a in self.src.src.fiber(x).elements() {
                let lhs = self.src.maps[x].apply(a);
                let rhs = q_theta.apply(self.dst.maps[x].apply(a));
                if !target.leq(lhs, rhs) {
                    out.push(Violation::new(
                        "lax 2-arrow",
                        format!("{} at {}", c.object_name(x), self.src.src.fiber(x).name(a)),
                    ));
                }
            }
        }
        Ok(out)
    }

    /// Vertical composite `self · first` with components `ζ_X ∘ θ_X`.
    pub fn after(&self, first: &TwoArrow) -> Result<TwoArrow> {
        if first.dst != self.src {
            return Err(Error::Boundary("vertical composite of 2-arrows does not meet".into()));
        }
        Ok(TwoArrow {
            src: first.src.clone(),
            dst: self.dst.clone(),
            theta: self.theta.after(&first.theta)?,
        })
    }

    /// Whiskering `θ a` along a 1-arrow into the common source.
    pub fn whisker_pre(&self, arrow: &OneArrow) -> Result<TwoArrow> {
        Ok(TwoArrow {
            src: self.src.after(arrow)?,
            dst: self.dst.after(arrow)?,
            theta: self.theta.precompose(&arrow.functor)?,
        })
    }

    /// Whiskering `b θ` along a 1-arrow out of the common target.
    pub fn whisker_post(&self, arrow: &OneArrow) -> Result<TwoArrow> {
        Ok(TwoArrow {
            src: arrow.after(&self.src)?,
            dst: arrow.after(&self.dst)?,
            theta: self.theta.postcompose(&arrow.functor)?,
        })
    }
}

/// The doctrine `P²` with fibers `P X × P X` and the diagonal `⟨Id, Δ⟩: P → P²`.
pub fn square_doctrine(doctrine: &Arc<Doctrine>) -> Result<(Arc<Doctrine>, OneArrow)> {
    let c = doctrine.base().clone();
    let fibers: Vec<Arc<FinPoset>> = c
        .objects()
        .map(|x| {
            let f = doctrine.fiber(x);
            Arc::new(FinPoset::product(f, f))
        })
        .collect();
    let square = Arc::new(Doctrine::from_graphs(
        format!("{}²", doctrine.name()),
        c.clone(),
        fibers,
        |t| {
            let r = doctrine.reindex(t);
            let (m_src, m_dst) = (r.src().len(), r.dst().len());
            (0..m_src * m_src)
                .map(|k| r.apply(k / m_src) * m_dst + r.apply(k % m_src))
                .collect()
        },
    )?);
    let diagonal = OneArrow::vertical(doctrine.clone(), square.clone(), |x| {
        let m = doctrine.fiber(x).len();
        (0..m).map(|a| a * m + a).collect()
    })?;
    Ok((square, diagonal))
}

/// A chosen product `left × factor` with its projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductEntry {
    pub left: usize,
    pub product: usize,
    /// `π₁: product → left`.
    pub first: usize,
    /// `π₂: product → factor`.
    pub second: usize,
}

/// Chosen binary products with a fixed right factor, and the pairing of arrows into them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProductData {
    pub factor: usize,
    pub entries: Vec<ProductEntry>,
    /// `(a, b) ↦ ⟨a, b⟩` for `a: Z → left`, `b: Z → factor`.
    pub pairing: BTreeMap<(usize, usize), usize>,
}

/// The outputs of [`power_doctrine`].
#[derive(Clone, Debug)]
pub struct PowerDoctrine {
    /// `P` restricted to the objects with a chosen product.
    pub restricted: Arc<Doctrine>,
    /// `P^X(Y) = P(Y × X)` over the same objects.
    pub power: Arc<Doctrine>,
    /// `⟨Id, p^X⟩` with `p^X_Y = P(π₁)`.
    pub weakening: OneArrow,
    /// Inclusion of the restricted base into the base of `P`.
    pub inclusion: Functor,
}

/// The doctrine `Y ↦ P(Y × X)` over the full subcategory on the objects with chosen products.
pub fn power_doctrine(doctrine: &Arc<Doctrine>, data: &ProductData) -> Result<PowerDoctrine> {
    let c = doctrine.base();
    let members: Vec<usize> = data.entries.iter().map(|e| e.left).collect();
    for e in &data.entries {
        if c.src(e.first) != e.product
            || c.dst(e.first) != e.left
            || c.src(e.second) != e.product
            || c.dst(e.second) != data.factor
        {
            return Err(Error::Boundary(format!(
                "projections of the product for `{}` are mistyped",
                c.object_name(e.left)
            )));
        }
    }
    let (sub, inclusion) = c.full_subcategory(&members)?;
    let restricted = Arc::new(doctrine.pullback_along(doctrine.name(), &inclusion)?);
    let fibers: Vec<Arc<FinPoset>> = data
        .entries
        .iter()
        .map(|e| doctrine.fiber(e.product).clone())
        .collect();
    let mut reindex = Vec::with_capacity(sub.num_arrows());
    for t in sub.arrow_ids() {
        let (y, y2) = (&data.entries[sub.src(t)], &data.entries[sub.dst(t)]);
        let f = inclusion.arr(t);
        let along = c.compose(f, y.first);
        let product_arrow = *data.pairing.get(&(along, y.second)).ok_or_else(|| {
            Error::Partial(format!(
                "product data missing for the pair ({}, {})",
                c.arrow_name(along),
                c.arrow_name(y.second)
            ))
        })?;
        if c.src(product_arrow) != y.product || c.dst(product_arrow) != y2.product {
            return Err(Error::Boundary(format!(
                "pairing of ({}, {}) is mistyped",
                c.arrow_name(along),
                c.arrow_name(y.second)
            )));
        }
        reindex.push(doctrine.reindex(product_arrow).clone());
    }
    let power = Arc::new(Doctrine::new(
        format!("{}^{}", doctrine.name(), c.object_name(data.factor)),
        sub,
        fibers,
        reindex,
    )?);
    let weakening = OneArrow::vertical(restricted.clone(), power.clone(), |y| {
        doctrine.reindex(data.entries[y].first).graph().to_vec()
    })?;
    Ok(PowerDoctrine {
        restricted,
        power,
        weakening,
        inclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::powerset_poset;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn chain2() -> Arc<FinCategory> {
        Arc::new(FinCategory::thin(names(&["a", "b"]), |x, y| x <= y).unwrap())
    }

    /// Over the 2-chain: fibers pw{p} at both objects, reindexing along a<=b the identity.
    fn two_level() -> Arc<Doctrine> {
        let c = chain2();
        let f = Arc::new(powerset_poset(&names(&["p"])));
        Arc::new(Doctrine::constant("P", c, f))
    }

    #[test]
    fn constant_doctrine_passes() {
        assert!(two_level().check().is_empty());
    }

    #[test]
    fn corrupted_composition_reported() {
        // Over the 3-chain, make reindex(a<=c) disagree with the composite.
        let c = Arc::new(FinCategory::thin(names(&["a", "b", "c"]), |x, y| x <= y).unwrap());
        let f = Arc::new(powerset_poset(&names(&["p"])));
        let ac = c.arrow_index("a<=c").unwrap();
        let d = Doctrine::from_graphs("P", c.clone(), vec![f.clone(); 3], |t| {
            if t == ac {
                vec![0, 0]
            } else {
                vec![0, 1]
            }
        })
        .unwrap();
        let v = d.check();
        assert_eq!(
            v,
            vec![Violation::new("reindexing composition", "(b<=c, a<=b)")]
        );
    }

    #[test]
    fn identity_one_arrow_and_units() {
        let p = two_level();
        let id = OneArrow::identity(p.clone());
        assert!(id.check().unwrap().is_empty());
        let lax = OneArrow::vertical(p.clone(), p.clone(), |_| vec![0, 0]).unwrap();
        assert_eq!(id.after(&lax).unwrap(), lax);
        assert_eq!(lax.after(&id).unwrap(), lax);
    }

    #[test]
    fn non_natural_fiber_map_reported() {
        let c = chain2();
        let f = Arc::new(powerset_poset(&names(&["p"])));
        let p = Arc::new(Doctrine::constant("P", c, f));
        let bad = OneArrow::vertical(p.clone(), p.clone(), |x| if x == 0 { vec![0, 0] } else { vec![0, 1] })
            .unwrap();
        let v = bad.check().unwrap();
        assert_eq!(v, vec![Violation::new("naturality", "a<=b at {p}")]);
    }

    #[test]
    fn two_arrow_checks_and_composition() {
        let p = two_level();
        let bottom = OneArrow::vertical(p.clone(), p.clone(), |_| vec![0, 0]).unwrap();
        let id = OneArrow::identity(p.clone());
        let theta = NatTransformation::identity(Functor::identity(p.base().clone()));
        let t = TwoArrow::new(bottom.clone(), id.clone(), theta.clone()).unwrap();
        assert!(t.check().unwrap().is_empty());
        assert!(TwoArrow::identity(id.clone()).check().unwrap().is_empty());
        let back = TwoArrow::new(id.clone(), bottom.clone(), theta.clone()).unwrap();
        assert_eq!(
            back.check().unwrap(),
            vec![
                Violation::new("lax 2-arrow", "a at {p}"),
                Violation::new("lax 2-arrow", "b at {p}")
            ]
        );
        let top = OneArrow::vertical(p.clone(), p.clone(), |_| vec![1, 1]).unwrap();
        let t2 = TwoArrow::new(id.clone(), top, theta).unwrap();
        let composite = t2.after(&t).unwrap();
        assert!(composite.check().unwrap().is_empty());
        assert!(matches!(t.after(&t), Err(Error::Boundary(_))));
        // whiskering keeps validity
        assert!(t.whisker_pre(&bottom).unwrap().check().unwrap().is_empty());
        assert!(t.whisker_post(&bottom).unwrap().check().unwrap().is_empty());
        assert_eq!(TwoArrow::identity(id.clone()).after(&t).unwrap(), t);
    }

    #[test]
    fn square_doctrine_shapes() {
        let c = Arc::new(FinCategory::terminal());
        let one = Arc::new(Doctrine::constant("P", c.clone(), Arc::new(FinPoset::one_point("x"))));
        let (sq, diag) = square_doctrine(&one).unwrap();
        assert_eq!(sq.fiber(0).len(), 1);
        assert!(diag.check().unwrap().is_empty());
        let two = two_level();
        let (sq, diag) = square_doctrine(&two).unwrap();
        assert_eq!(sq.fiber(0).len(), 4);
        assert!(sq.check().is_empty());
        assert!(diag.check().unwrap().is_empty());
    }

    #[test]
    fn power_by_terminal_is_the_same_doctrine() {
        let c = Arc::new(FinCategory::terminal());
        let f = Arc::new(powerset_poset(&names(&["p", "q"])));
        let p = Arc::new(Doctrine::constant("P", c.clone(), f));
        let id = c.identity(0);
        let data = ProductData {
            factor: 0,
            entries: vec![ProductEntry {
                left: 0,
                product: 0,
                first: id,
                second: id,
            }],
            pairing: [((id, id), id)].into_iter().collect(),
        };
        let pow = power_doctrine(&p, &data).unwrap();
        assert_eq!(*pow.power, *p);
        assert!(pow.weakening.check().unwrap().is_empty());
        assert!(pow.weakening.is_identity());
    }

    #[test]
    fn power_reports_missing_pairing() {
        let c = chain2();
        let f = Arc::new(powerset_poset(&names(&["p"])));
        let p = Arc::new(Doctrine::constant("P", c.clone(), f));
        // products with factor b (terminal): Y × b = Y
        let data = ProductData {
            factor: 1,
            entries: vec![
                ProductEntry {
                    left: 0,
                    product: 0,
                    first: c.identity(0),
                    second: c.arrow_index("a<=b").unwrap(),
                },
                ProductEntry {
                    left: 1,
                    product: 1,
                    first: c.identity(1),
                    second: c.identity(1),
                },
            ],
            pairing: BTreeMap::new(),
        };
        assert!(matches!(power_doctrine(&p, &data), Err(Error::Partial(_))));
    }
}
