//! Kripke frames, the doctrine `pw(W)^(−)` with `j_R ∘ −`, and W-indexed families.

use std::collections::HashMap;
use std::sync::Arc;

use crate::adjunction::ModalArrow;
use crate::doctrine::{Doctrine, OneArrow};
use crate::error::{Error, Result};
use crate::fincat::Functor;
use crate::interior::InteriorOp;
use crate::order::{powerset_poset, subset_name, FinPoset};

use super::{exponential_doctrine, preimage, Exponent, FunctionCategory, SetObject};

/// A finite set of worlds with an accessibility relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeFrame {
    worlds: Vec<String>,
    rel: Vec<bool>,
}

impl KripkeFrame {
    /// Builds a frame from related index pairs. No axioms are imposed.
    pub fn new(worlds: Vec<String>, pairs: &[(usize, usize)]) -> Result<KripkeFrame> {
        let n = worlds.len();
        if n > 16 {
            return Err(Error::TooLarge {
                what: "worlds".into(),
                needed: n as u128,
                cap: 16,
            });
        }
        let mut rel = vec![false; n * n];
        for &(w, v) in pairs {
            if w >= n || v >= n {
                return Err(Error::Unknown(format!("world index {}", w.max(v))));
            }
            rel[w * n + v] = true;
        }
        Ok(KripkeFrame { worlds, rel })
    }

    pub fn from_names(worlds: &[&str], pairs: &[(&str, &str)]) -> Result<KripkeFrame> {
        let names: Vec<String> = worlds.iter().map(|s| s.to_string()).collect();
        let index = |w: &str| {
            worlds
                .iter()
                .position(|x| *x == w)
                .ok_or_else(|| Error::Unknown(format!("world `{w}`")))
        };
        let pairs = pairs
            .iter()
            .map(|(w, v)| Ok((index(w)?, index(v)?)))
            .collect::<Result<Vec<_>>>()?;
        KripkeFrame::new(names, &pairs)
    }

    /// The reflexive closure of the given pairs.
    pub fn reflexive(worlds: &[&str], pairs: &[(&str, &str)]) -> Result<KripkeFrame> {
        let mut all: Vec<(&str, &str)> = worlds.iter().map(|w| (*w, *w)).collect();
        all.extend_from_slice(pairs);
        KripkeFrame::from_names(worlds, &all)
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn related(&self, w: usize, v: usize) -> bool {
        self.rel[w * self.len() + v]
    }

    /// `R(w)` as a bitmask.
    pub fn successors(&self, w: usize) -> u64 {
        (0..self.len())
            .filter(|&v| self.related(w, v))
            .fold(0, |acc, v| acc | 1 << v)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|w| self.related(w, w))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| !(self.related(a, b) && self.related(b, c)) || self.related(a, c)))
        })
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    pub fn full_mask(&self) -> u64 {
        (1u64 << self.len()) - 1
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n * n).filter(|&k| self.rel[k]).map(|k| (k / n, k % n)).collect()
    }
}

/// `j_R(A) = {w | R(w) ⊆ A}`.
pub fn kripke_box(frame: &KripkeFrame, a: u64) -> Result<u64> {
    if a & !frame.full_mask() != 0 {
        return Err(Error::Invalid(format!("{a:#b} is not a set of worlds")));
    }
    Ok((0..frame.len())
        .filter(|&w| frame.successors(w) & !a == 0)
        .fold(0, |acc, w| acc | 1 << w))
}

/// The doctrine `pw(W)^(−)` over a fragment of finite sets with the operator `j_R ∘ −`.
#[derive(Clone, Debug)]
pub struct KripkeInstance {
    pub frame: KripkeFrame,
    pub base: FunctionCategory,
    pub doctrine: Arc<Doctrine>,
    pub op: InteriorOp,
    pub shapes: Vec<Exponent>,
}

/// Builds `pw(W)^(−)` with `j_R ∘ −` for any frame; interior laws need a preorder and are checked separately.
pub fn kripke_doctrine(frame: &KripkeFrame, sets: Vec<SetObject>) -> Result<KripkeInstance> {
    let base = FunctionCategory::finset(sets)?;
    let pw = powerset_poset(frame.worlds());
    let (doctrine, shapes) = exponential_doctrine("pw(W)", &base, &pw)?;
    let boxed: Vec<usize> = (0..pw.len())
        .map(|a| kripke_box(frame, a as u64).map(|b| b as usize))
        .collect::<Result<_>>()?;
    let op = InteriorOp::from_graphs(doctrine.clone(), |x| shapes[x].pointwise(|a| boxed[a]))?;
    Ok(KripkeInstance {
        frame: frame.clone(),
        base,
        doctrine,
        op,
        shapes,
    })
}

/// A W-indexed family `⟨X̄, (X_w)⟩` with parts as bitmasks over the carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedFamily {
    pub name: String,
    pub carrier: Vec<String>,
    pub parts: Vec<u64>,
}

impl IndexedFamily {
    pub fn new(name: impl Into<String>, carrier: &[&str], parts: &[&[&str]]) -> Result<IndexedFamily> {
        let carrier: Vec<String> = carrier.iter().map(|s| s.to_string()).collect();
        let masks = parts
            .iter()
            .map(|part| {
                part.iter().try_fold(0u64, |acc, e| {
                    let i = carrier
                        .iter()
                        .position(|c| c == e)
                        .ok_or_else(|| Error::Invalid(format!("`{e}` is not in the carrier")))?;
                    Ok(acc | 1 << i)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IndexedFamily {
            name: name.into(),
            carrier,
            parts: masks,
        })
    }

    /// The constant family of value `S`.
    pub fn constant(set: &SetObject, worlds: usize) -> IndexedFamily {
        let full = (1u64 << set.len()) - 1;
        IndexedFamily {
            name: set.name.clone(),
            carrier: set.elements.clone(),
            parts: vec![full; worlds],
        }
    }

    /// `w R v ⇒ X_w ⊆ X_v`.
    pub fn is_monotone(&self, frame: &KripkeFrame) -> bool {
        frame.pairs().into_iter().all(|(w, v)| self.parts[w] & !self.parts[v] == 0)
    }
}

/// A subfamily `⟨Ā, (A_w)⟩` encoded as `[Ā, A_w1, A_w2, …]`.
pub type Subfamily = Vec<u64>;

/// `Sub_Fam(W)` over the full subcategory on `families`, with `(□A)_w = ⋂_{v∈R(w)} A_v`.
#[derive(Clone, Debug)]
pub struct FamInstance {
    pub frame: KripkeFrame,
    pub families: Vec<IndexedFamily>,
    pub base: FunctionCategory,
    pub doctrine: Arc<Doctrine>,
    pub op: InteriorOp,
    /// Fiber elements in index order.
    pub elements: Vec<Vec<Subfamily>>,
}

impl FamInstance {
    pub fn index_of(&self, x: usize, sub: &[u64]) -> Option<usize> {
        self.elements[x].iter().position(|s| s == sub)
    }
}

fn submasks(mask: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut s = mask;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out.reverse();
    out
}

fn subfamilies(family: &IndexedFamily) -> Vec<Subfamily> {
    let full = (1u64 << family.carrier.len()) - 1;
    let mut out = Vec::new();
    for bar in submasks(full) {
        let mut partial: Vec<Subfamily> = vec![vec![bar]];
        for &part in &family.parts {
            partial = partial
                .into_iter()
                .flat_map(|prefix| {
                    submasks(part & bar).into_iter().map(move |a| {
                        let mut next = prefix.clone();
                        next.push(a);
                        next
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out
}

fn subfamily_name(family: &IndexedFamily, sub: &[u64]) -> String {
    let parts: Vec<String> = sub[1..].iter().map(|&m| subset_name(&family.carrier, m)).collect();
    format!("⟨{}:{}⟩", subset_name(&family.carrier, sub[0]), parts.join(","))
}

/// Requires every family to be monotone along the frame, where pullback reindexing commutes with the operator.
pub fn fam_doctrine(frame: &KripkeFrame, families: Vec<IndexedFamily>) -> Result<FamInstance> {
    for f in &families {
        if f.parts.len() != frame.len() {
            return Err(Error::Invalid(format!("family `{}` has a part count different from the worlds", f.name)));
        }
        if f.carrier.len() > 8 {
            return Err(Error::TooLarge {
                what: format!("carrier of `{}`", f.name),
                needed: f.carrier.len() as u128,
                cap: 8,
            });
        }
        if !f.is_monotone(frame) {
            return Err(Error::Invalid(format!("family `{}` is not monotone along the frame", f.name)));
        }
    }
    let sets = families
        .iter()
        .map(|f| SetObject {
            name: f.name.clone(),
            elements: f.carrier.clone(),
        })
        .collect();
    let base = FunctionCategory::new(sets, |s, d, t| {
        let t: Vec<usize> = t.to_vec();
        families[s]
            .parts
            .iter()
            .zip(&families[d].parts)
            .all(|(&xs, &ys)| xs as usize & !preimage(&t, ys as usize) == 0)
    })?;
    let c = base.category.clone();
    let elements: Vec<Vec<Subfamily>> = families.iter().map(subfamilies).collect();
    let index: Vec<HashMap<Subfamily, usize>> = elements
        .iter()
        .map(|es| es.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();
    let fibers: Vec<Arc<FinPoset>> = (0..families.len())
        .map(|x| {
            let es = &elements[x];
            let names = es.iter().map(|s| subfamily_name(&families[x], s)).collect();
            Arc::new(FinPoset::from_fn_trusted(names, |a, b| {
                es[a].iter().zip(&es[b]).all(|(p, q)| p & !q == 0)
            }))
        })
        .collect();
    let doctrine = Arc::new(Doctrine::from_graphs("Sub_Fam", c.clone(), fibers, |t| {
        let (s, d) = (c.src(t), c.dst(t));
        let f = base.function(t);
        elements[d]
            .iter()
            .map(|a| {
                let mut pulled = vec![preimage(f, a[0] as usize) as u64];
                for (w, &part) in a[1..].iter().enumerate() {
                    pulled.push(families[s].parts[w] & preimage(f, part as usize) as u64);
                }
                index[s][&pulled]
            })
            .collect()
    })?);
    let op = InteriorOp::from_graphs(doctrine.clone(), |x| {
        elements[x]
            .iter()
            .map(|a| {
                let mut boxed = vec![a[0]];
                for w in 0..frame.len() {
                    let meet = (0..frame.len())
                        .filter(|&v| frame.related(w, v))
                        .fold(a[0], |acc, v| acc & a[1 + v]);
                    boxed.push(meet);
                }
                index[x][&boxed]
            })
            .collect()
    })?;
    Ok(FamInstance {
        frame: frame.clone(),
        families,
        base,
        doctrine,
        op,
        elements,
    })
}

/// `⟨C, c⟩: ⟨pw(W)^(−), j_R∘−⟩ → ⟨Sub_Fam, □⟩` with `C S` the constant family and `c_S(α)_w = {s | w ∈ α(s)}`.
pub fn constant_family_arrow(frame: &KripkeFrame, sets: Vec<SetObject>) -> Result<(KripkeInstance, FamInstance, ModalArrow)> {
    let kripke = kripke_doctrine(frame, sets.clone())?;
    let families: Vec<IndexedFamily> = sets.iter().map(|s| IndexedFamily::constant(s, frame.len())).collect();
    let fam = fam_doctrine(frame, families)?;
    let kc = kripke.base.category.clone();
    let arrows = kc
        .arrow_ids()
        .map(|t| {
            fam.base
                .arrow_for(kc.src(t), kc.dst(t), kripke.base.function(t))
                .ok_or_else(|| Error::Closure(format!("`{}` is not a map of constant families", kc.arrow_name(t))))
        })
        .collect::<Result<Vec<_>>>()?;
    let functor = Functor::new(kc.clone(), fam.base.category.clone(), kc.objects().collect(), arrows)?;
    let arrow = OneArrow::from_graphs(kripke.doctrine.clone(), fam.doctrine.clone(), functor, |x| {
        let shape = kripke.shapes[x];
        let full = (1u64 << shape.len) - 1;
        (0..shape.count())
            .map(|a| {
                let alpha = shape.decode(a);
                let mut sub = vec![full];
                for w in 0..frame.len() {
                    let part = (0..shape.len)
                        .filter(|&s| alpha[s] >> w & 1 == 1)
                        .fold(0u64, |acc, s| acc | 1 << s);
                    sub.push(part);
                }
                fam.index_of(x, &sub).expect("constant family subfamily")
            })
            .collect()
    })?;
    let modal = ModalArrow {
        arrow,
        source: kripke.op.clone(),
        target: fam.op.clone(),
    };
    Ok((kripke, fam, modal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> KripkeFrame {
        KripkeFrame::reflexive(&["w1", "w2"], &[("w1", "w2")]).unwrap()
    }

    #[test]
    fn box_examples() {
        let f = chain2();
        assert_eq!(kripke_box(&f, 0b11).unwrap(), 0b11);
        assert_eq!(kripke_box(&f, 0).unwrap(), 0);
        assert_eq!(kripke_box(&f, 0b10).unwrap(), 0b10);
        assert!(kripke_box(&f, 0b100).is_err());
    }

    #[test]
    fn kripke_doctrine_fibers() {
        let f = chain2();
        let k = kripke_doctrine(&f, vec![SetObject::new("1", &["*"])]).unwrap();
        assert_eq!(k.doctrine.fiber(0).len(), 4);
        let k = kripke_doctrine(&f, vec![SetObject::new("2", &["0", "1"])]).unwrap();
        assert_eq!(k.doctrine.fiber(0).len(), 16);
        assert!(k.op.check().is_empty());
        // pointwise agreement with j_R
        for a in 0..16 {
            let values = k.shapes[0].decode(a);
            let boxed = k.shapes[0].decode(k.op.apply(0, a));
            for (v, b) in values.into_iter().zip(boxed) {
                assert_eq!(kripke_box(&f, v as u64).unwrap(), b as u64);
            }
        }
    }

    #[test]
    fn non_transitive_frame_fails_axiom_4() {
        let f = KripkeFrame::reflexive(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(!f.is_transitive());
        let k = kripke_doctrine(&f, vec![SetObject::new("1", &["*"])]).unwrap();
        let v = k.op.check();
        assert!(v.iter().any(|x| x.law == "axiom 4"));
    }

    #[test]
    fn fam_examples() {
        let one = KripkeFrame::reflexive(&["w"], &[]).unwrap();
        let fam = fam_doctrine(&one, vec![IndexedFamily::new("X", &["a", "b"], &[&["a", "b"]]).unwrap()]).unwrap();
        assert!(fam.op.is_identity());

        let f = chain2();
        let x = IndexedFamily::new("X", &["a", "b"], &[&["a"], &["a", "b"]]).unwrap();
        let fam = fam_doctrine(&f, vec![x]).unwrap();
        assert!(fam.doctrine.check().is_empty());
        assert!(fam.op.check().is_empty());
        for (i, a) in fam.elements[0].iter().enumerate() {
            let boxed = &fam.elements[0][fam.op.apply(0, i)];
            assert_eq!(boxed[1], a[1] & a[2]);
            assert_eq!(boxed[2], a[2]);
        }
    }

    #[test]
    fn non_monotone_family_rejected() {
        let f = chain2();
        let x = IndexedFamily::new("X", &["a"], &[&["a"], &[]]).unwrap();
        assert!(matches!(fam_doctrine(&f, vec![x]), Err(Error::Invalid(_))));
    }

    #[test]
    fn constant_family_arrow_is_modal() {
        let f = chain2();
        let (_, _, modal) =
            constant_family_arrow(&f, vec![SetObject::new("1", &["*"]), SetObject::new("2", &["0", "1"])]).unwrap();
        assert!(modal.check().unwrap().is_empty());
    }
}
