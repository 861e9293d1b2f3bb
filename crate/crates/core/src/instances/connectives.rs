//! Connectives as modalities: conjunction from `Δ ⊣ ∧`, universal quantification from `p^X ⊣ ∀X`,
//! and subobjects of finite sets reindexed by pullback.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::adjunction::{vertical_modality, DoctrineAdjunction};
use crate::doctrine::{power_doctrine, square_doctrine, Doctrine, OneArrow, PowerDoctrine, ProductData, ProductEntry};
use crate::error::{require, Error, Result, Violation};
use crate::interior::InteriorOp;
use crate::order::{subset_name, FinPoset};

use super::{powerset_doctrine, FunctionCategory, SetObject};

/// Subobjects of finite sets, each represented by the image of its mono, reindexed by explicit pullback.
pub fn subobject_doctrine_finset(base: &FunctionCategory) -> Result<Arc<Doctrine>> {
    let c = base.category.clone();
    let fibers: Vec<Arc<FinPoset>> = base
        .sets
        .iter()
        .map(|s| {
            let names = (0..1usize << s.len())
                .map(|m| format!("{}↪{}", subset_name(&s.elements, m as u64), s.name))
                .collect();
            Arc::new(FinPoset::from_fn_trusted(names, |a, b| a & !b == 0))
        })
        .collect();
    Ok(Arc::new(Doctrine::from_graphs("Sub", c.clone(), fibers, |t| {
        let f = base.function(t);
        (0..1usize << base.size(c.dst(t))).map(|m| pullback_image(f, m)).collect()
    })?))
}

/// Image of the projection `Y ×_Z S → Y` for the mono `S ↪ Z` with image `m`.
fn pullback_image(f: &[usize], m: usize) -> usize {
    let mono: Vec<usize> = (0..usize::BITS as usize).filter(|z| m >> z & 1 == 1).collect();
    let pairs = f
        .iter()
        .enumerate()
        .flat_map(|(y, &fy)| mono.iter().filter(move |&&z| z == fy).map(move |_| y));
    pairs.fold(0, |acc, y| acc | 1 << y)
}

/// The fiberwise identity `Sub → pw`, a natural bijection when it checks.
pub fn subobject_powerset_iso(base: &FunctionCategory) -> Result<OneArrow> {
    let sub = subobject_doctrine_finset(base)?;
    let pw = powerset_doctrine("pw", base)?;
    OneArrow::vertical(sub.clone(), pw, |x| sub.fiber(x).elements().collect())
}

/// A vertical adjunction and the modality it induces on its codomain.
#[derive(Clone, Debug)]
pub struct ConnectiveModality {
    pub adjunction: DoctrineAdjunction,
    pub op: InteriorOp,
}

/// Greatest lower bound of `a` and `b`, if any.
fn binary_meet(poset: &FinPoset, a: usize, b: usize) -> Option<usize> {
    let lower: Vec<usize> = poset.elements().filter(|&c| poset.leq(c, a) && poset.leq(c, b)).collect();
    lower.iter().copied().find(|&m| lower.iter().all(|&c| poset.leq(c, m)))
}

/// `⟨α, β⟩ ↦ ⟨α∧β, α∧β⟩` on `P²`, from the diagonal and its right adjoint `∧`.
pub fn conjunction_modality(doctrine: &Arc<Doctrine>) -> Result<ConnectiveModality> {
    let c = doctrine.base();
    let mut meets: Vec<Vec<usize>> = Vec::with_capacity(c.num_objects());
    for x in c.objects() {
        let f = doctrine.fiber(x);
        let m = f.len();
        let mut table = Vec::with_capacity(m * m);
        for k in 0..m * m {
            let (a, b) = (k / m, k % m);
            table.push(binary_meet(f, a, b).ok_or_else(|| {
                Error::NotALattice(format!("{} ∧ {} missing at `{}`", f.name(a), f.name(b), c.object_name(x)))
            })?);
        }
        meets.push(table);
    }
    let mut violations = Vec::new();
    for t in c.arrow_ids() {
        let r = doctrine.reindex(t);
        // r: P(dst t) → P(src t)
        let (m_from, m_to) = (r.src().len(), r.dst().len());
        let (from_meets, to_meets) = (&meets[c.dst(t)], &meets[c.src(t)]);
        for k in 0..m_from * m_from {
            let (a, b) = (k / m_from, k % m_from);
            if r.apply(from_meets[k]) != to_meets[r.apply(a) * m_to + r.apply(b)] {
                violations.push(Violation::new(
                    "meets preserved by reindexing",
                    format!("{} at {},{}", c.arrow_name(t), r.src().name(a), r.src().name(b)),
                ));
            }
        }
    }
    require("conjunction", violations)?;
    let (square, diagonal) = square_doctrine(doctrine)?;
    let wedge = OneArrow::vertical(square, doctrine.clone(), |x| meets[x].clone())?;
    let adjunction = DoctrineAdjunction::vertical(diagonal, wedge)?;
    let op = vertical_modality(&adjunction)?;
    Ok(ConnectiveModality { adjunction, op })
}

/// Powersets over finite sets closed under `− × X`, with `α ↦ p^X(∀X.α)` on `P^X`.
#[derive(Clone, Debug)]
pub struct ForallInstance {
    pub base: FunctionCategory,
    pub doctrine: Arc<Doctrine>,
    pub power: PowerDoctrine,
    pub modality: ConnectiveModality,
}

/// Builds `Y × X` for each given `Y`, with elements `(y,x)` in `y`-major order.
pub fn forall_modality(sets: Vec<SetObject>, factor: SetObject) -> Result<ForallInstance> {
    let k = factor.len();
    let mut all = sets.clone();
    let factor_index = match all.iter().position(|s| *s == factor) {
        Some(i) => i,
        None => {
            all.push(factor.clone());
            all.len() - 1
        }
    };
    let mut product_index = Vec::with_capacity(sets.len());
    for y in &sets {
        let elements = y
            .elements
            .iter()
            .flat_map(|a| factor.elements.iter().map(move |b| format!("({a},{b})")))
            .collect();
        all.push(SetObject {
            name: format!("{}×{}", y.name, factor.name),
            elements,
        });
        product_index.push(all.len() - 1);
    }
    let base = FunctionCategory::finset(all)?;
    let c = base.category.clone();
    let entries: Vec<ProductEntry> = (0..sets.len())
        .map(|i| {
            let p = product_index[i];
            let n = base.size(i);
            let first: Vec<usize> = (0..n * k).map(|z| z / k).collect();
            let second: Vec<usize> = (0..n * k).map(|z| z % k).collect();
            ProductEntry {
                left: i,
                product: p,
                first: base.arrow_for(p, i, &first).expect("all functions"),
                second: base.arrow_for(p, factor_index, &second).expect("all functions"),
            }
        })
        .collect();
    let mut pairing = BTreeMap::new();
    for (j, target) in entries.iter().enumerate() {
        for a in c.arrow_ids().filter(|&a| c.dst(a) == j) {
            for b in c.arrow_ids().filter(|&b| c.dst(b) == factor_index && c.src(b) == c.src(a)) {
                let (fa, fb) = (base.function(a), base.function(b));
                let paired: Vec<usize> = fa.iter().zip(fb).map(|(&y, &x)| y * k + x).collect();
                let arrow = base.arrow_for(c.src(a), target.product, &paired).expect("all functions");
                pairing.insert((a, b), arrow);
            }
        }
    }
    let data = ProductData {
        factor: factor_index,
        entries,
        pairing,
    };
    let doctrine = powerset_doctrine("pw", &base)?;
    let power = power_doctrine(&doctrine, &data)?;
    let forall = OneArrow::vertical(power.power.clone(), power.restricted.clone(), |y| {
        let n = sets[y].len();
        (0..1usize << (n * k))
            .map(|alpha| {
                (0..n)
                    .filter(|&a| (0..k).all(|x| alpha >> (a * k + x) & 1 == 1))
                    .fold(0, |acc, a| acc | 1 << a)
            })
            .collect()
    })?;
    let adjunction = DoctrineAdjunction::vertical(power.weakening.clone(), forall)?;
    let op = vertical_modality(&adjunction)?;
    Ok(ForallInstance {
        base,
        doctrine,
        power,
        modality: ConnectiveModality { adjunction, op },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;

    fn small_sets() -> FunctionCategory {
        FunctionCategory::finset(vec![
            SetObject::new("1", &["*"]),
            SetObject::new("2", &["a", "b"]),
            SetObject::new("3", &["p", "q", "r"]),
        ])
        .unwrap()
    }

    #[test]
    fn subobjects_match_powersets() {
        let base = small_sets();
        let sub = subobject_doctrine_finset(&base).unwrap();
        assert!(sub.check().is_empty());
        assert_eq!(sub.fiber(0).len(), 2);
        let pw = powerset_doctrine("pw", &base).unwrap();
        for t in base.category.arrow_ids() {
            assert_eq!(sub.reindex(t).graph(), pw.reindex(t).graph());
        }
        let iso = subobject_powerset_iso(&base).unwrap();
        assert!(iso.check().unwrap().is_empty());
    }

    #[test]
    fn conjunction_on_powersets() {
        let base = small_sets();
        let pw = powerset_doctrine("pw", &base).unwrap();
        let conj = conjunction_modality(&pw).unwrap();
        assert!(conj.adjunction.check().unwrap().is_empty());
        assert!(conj.op.check().is_empty());
        // pw{a,b}²: ⟨{a},{b}⟩ has index 1*4+2
        assert_eq!(conj.op.apply(1, 4 + 2), 0);
        assert_eq!(conj.op.apply(1, 3 * 4 + 2), 2 * 4 + 2);
        assert_eq!(conj.op.apply(1, 5), 5);
    }

    #[test]
    fn conjunction_needs_preserved_meets() {
        // Over the 2-chain, reindex {0 < a, b} onto the 2-chain so that a∧b = 0 goes to ⊥ but a, b go to ⊤.
        let c = Arc::new(FinCategory::thin(vec!["x".into(), "y".into()], |a, b| a <= b).unwrap());
        let v = Arc::new(FinPoset::from_fn_trusted(
            vec!["0".into(), "a".into(), "b".into()],
            |p, q| p == q || p == 0,
        ));
        let two = Arc::new(FinPoset::chain(vec!["⊥".into(), "⊤".into()]).unwrap());
        let xy = c.arrow_index("x<=y").unwrap();
        let d = Arc::new(
            Doctrine::from_graphs("V", c.clone(), vec![two, v], |t| if t == xy { vec![0, 1, 1] } else if c.src(t) == 0 { vec![0, 1] } else { vec![0, 1, 2] })
                .unwrap(),
        );
        assert!(d.check().is_empty());
        assert!(matches!(conjunction_modality(&d), Err(Error::Laws { .. })));
    }

    #[test]
    fn forall_examples() {
        let inst = forall_modality(
            vec![SetObject::new("Y", &["y"]), SetObject::new("Z", &["u", "v"])],
            SetObject::new("X", &["0", "1"]),
        )
        .unwrap();
        let m = &inst.modality;
        assert!(m.adjunction.check().unwrap().is_empty());
        assert!(m.op.check().is_empty());
        assert_eq!(m.op.apply(0, 0b01), 0);
        assert_eq!(m.op.apply(0, 0b11), 0b11);
        assert_eq!(m.op.apply(1, 0b0111), 0b0011);

        let trivial = forall_modality(vec![SetObject::new("Y", &["y", "z"])], SetObject::new("1", &["*"])).unwrap();
        assert!(trivial.modality.op.is_identity());
    }
}
