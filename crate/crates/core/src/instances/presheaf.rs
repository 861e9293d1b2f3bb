//! Finite presheaves over a preorder, restriction to the discrete base and its right adjoint.
//!
//! A presheaf `D` assigns a set `D(w)` to each world and a map `D_wv: D(w) → D(v)` to each `w ≤ v`.
//! Elements of the disjoint union `Σ_w D(w)` are numbered world by world, so subfamilies are bitmasks.

use std::sync::Arc;

use crate::adjunction::{am_modality, DoctrineAdjunction};
use crate::doctrine::{Doctrine, OneArrow};
use crate::enumerate::odometer;
use crate::error::{Error, Result};
use crate::fincat::{Functor, NatTransformation};
use crate::interior::InteriorOp;
use crate::order::{powerset_poset, FinPoset};

use super::kripke::KripkeFrame;
use super::{preimage, FunctionCategory, SetObject};

/// Most presheaves the closure under `RL` may reach before giving up.
pub const CLOSURE_CAP: usize = 8;

/// A presheaf on a finite preorder.
#[derive(Clone, Debug)]
pub struct FinPresheaf {
    pub name: String,
    pub sets: Vec<Vec<String>>,
    /// `maps[w * n + v]` is `D_wv` when `w ≤ v`.
    maps: Vec<Option<Vec<usize>>>,
}

impl PartialEq for FinPresheaf {
    fn eq(&self, other: &Self) -> bool {
        self.sets == other.sets && self.maps == other.maps
    }
}

impl Eq for FinPresheaf {}

impl FinPresheaf {
    /// Identity maps are filled in; every other related pair needs a map. Functoriality is checked.
    pub fn new(
        frame: &KripkeFrame,
        name: impl Into<String>,
        sets: Vec<Vec<String>>,
        maps: Vec<(usize, usize, Vec<usize>)>,
    ) -> Result<FinPresheaf> {
        let name = name.into();
        let n = frame.len();
        if !frame.is_preorder() {
            return Err(Error::Invalid("presheaf base must be a preorder".into()));
        }
        if sets.len() != n {
            return Err(Error::Partial(format!("`{name}` needs one set per world")));
        }
        let mut table: Vec<Option<Vec<usize>>> = vec![None; n * n];
        for w in 0..n {
            table[w * n + w] = Some((0..sets[w].len()).collect());
        }
        for (w, v, f) in maps {
            if w >= n || v >= n || !frame.related(w, v) {
                return Err(Error::Invalid(format!("`{name}` has a map between unrelated worlds")));
            }
            if f.len() != sets[w].len() || f.iter().any(|&y| y >= sets[v].len()) {
                return Err(Error::Invalid(format!(
                    "map {}→{} of `{name}` is not a function",
                    frame.worlds()[w],
                    frame.worlds()[v]
                )));
            }
            table[w * n + v] = Some(f);
        }
        let d = FinPresheaf { name, sets, maps: table };
        for (w, v) in frame.pairs() {
            if d.maps[w * n + v].is_none() {
                return Err(Error::Partial(format!(
                    "`{}` lacks the map {}→{}",
                    d.name,
                    frame.worlds()[w],
                    frame.worlds()[v]
                )));
            }
        }
        if d.maps.iter().enumerate().any(|(k, m)| k % (n + 1) == 0 && m.as_ref().is_some_and(|m| m.iter().enumerate().any(|(i, &j)| i != j))) {
            return Err(Error::Invalid(format!("`{}` has a non-identity map at a world", d.name)));
        }
        for (w, v) in frame.pairs() {
            for u in 0..n {
                if frame.related(v, u) {
                    let (wv, vu, wu) = (d.map(n, w, v), d.map(n, v, u), d.map(n, w, u));
                    for (i, &x) in wv.iter().enumerate() {
                        if vu[x] != wu[i] {
                            return Err(Error::Invalid(format!(
                                "`{}` is not functorial at {}≤{}≤{}",
                                d.name,
                                frame.worlds()[w],
                                frame.worlds()[v],
                                frame.worlds()[u]
                            )));
                        }
                    }
                }
            }
        }
        Ok(d)
    }

    /// The constant presheaf with identity maps.
    pub fn constant(frame: &KripkeFrame, name: impl Into<String>, elements: &[&str]) -> Result<FinPresheaf> {
        let set: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        let maps = frame
            .pairs()
            .into_iter()
            .filter(|(w, v)| w != v)
            .map(|(w, v)| (w, v, (0..set.len()).collect()))
            .collect();
        FinPresheaf::new(frame, name, vec![set; frame.len()], maps)
    }

    fn map(&self, n: usize, w: usize, v: usize) -> &[usize] {
        self.maps[w * n + v].as_deref().expect("related worlds")
    }

    /// `D_wv` for related worlds.
    pub fn restriction(&self, frame: &KripkeFrame, w: usize, v: usize) -> Option<&[usize]> {
        self.maps.get(w * frame.len() + v).and_then(|m| m.as_deref())
    }

    /// Offset of world `w` in the disjoint union.
    pub fn offset(&self, w: usize) -> usize {
        self.sets[..w].iter().map(Vec::len).sum()
    }

    pub fn total(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    fn world_of(&self, element: usize) -> (usize, usize) {
        let mut rest = element;
        for (w, s) in self.sets.iter().enumerate() {
            if rest < s.len() {
                return (w, rest);
            }
            rest -= s.len();
        }
        unreachable!("element outside the disjoint union")
    }

    fn as_set(&self, frame: &KripkeFrame) -> SetObject {
        let mut elements = Vec::new();
        for (w, s) in self.sets.iter().enumerate() {
            for e in s {
                elements.push(format!("{}:{}", frame.worlds()[w], e));
            }
        }
        SetObject {
            name: self.name.clone(),
            elements,
        }
    }
}

/// Renders a subfamily, e.g. `({a};{*})`.
pub fn family_name(sets: &[Vec<String>], mask: usize) -> String {
    let mut offset = 0;
    let parts: Vec<String> = sets
        .iter()
        .map(|s| {
            let members: Vec<&str> = (0..s.len())
                .filter(|i| mask >> (offset + i) & 1 == 1)
                .map(|i| s[i].as_str())
                .collect();
            offset += s.len();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    format!("({})", parts.join(";"))
}

/// `α_w ⊆ D_wv⁻¹(α_v)` for all `w ≤ v`.
pub fn is_subpresheaf(frame: &KripkeFrame, d: &FinPresheaf, mask: usize) -> bool {
    frame.pairs().into_iter().all(|(w, v)| {
        let f = d.map(frame.len(), w, v);
        (0..d.sets[w].len()).all(|i| mask >> (d.offset(w) + i) & 1 == 0 || mask >> (d.offset(v) + f[i]) & 1 == 1)
    })
}

/// `x ∈ □α` at `w` iff `D_wv(x) ∈ α_v` for every `v ≥ w`.
pub fn presheaf_box_local(frame: &KripkeFrame, d: &FinPresheaf, alpha: usize) -> usize {
    let n = frame.len();
    let mut out = 0;
    for w in 0..n {
        for i in 0..d.sets[w].len() {
            let kept = (0..n)
                .filter(|&v| frame.related(w, v))
                .all(|v| alpha >> (d.offset(v) + d.map(n, w, v)[i]) & 1 == 1);
            if kept {
                out |= 1 << (d.offset(w) + i);
            }
        }
    }
    out
}

/// The union of all subpresheaves contained in `α`, by enumeration.
pub fn presheaf_box_oracle(frame: &KripkeFrame, d: &FinPresheaf, alpha: usize) -> usize {
    let mut out = 0;
    let mut beta = alpha;
    loop {
        if is_subpresheaf(frame, d, beta) {
            out |= beta;
        }
        if beta == 0 {
            break;
        }
        beta = (beta - 1) & alpha;
    }
    out
}

/// The local operator on all subfamilies of a single presheaf, over the one-object base.
pub fn local_presheaf_op(frame: &KripkeFrame, d: &FinPresheaf) -> Result<InteriorOp> {
    if d.total() > 12 {
        return Err(Error::TooLarge {
            what: format!("elements of `{}`", d.name),
            needed: d.total() as u128,
            cap: 12,
        });
    }
    let ground = d.as_set(frame).elements;
    let poset = Arc::new(powerset_poset(&ground));
    let graph = (0..poset.len()).map(|a| presheaf_box_local(frame, d, a)).collect();
    InteriorOp::on_poset(poset, graph)
}

/// The adjunction `⟨L, λ⟩ ⊣ ⟨R, ρ⟩` between subobject doctrines over presheaves and over families.
#[derive(Clone, Debug)]
pub struct PresheafInstance {
    pub frame: KripkeFrame,
    pub presheaves: Vec<FinPresheaf>,
    /// Families over the discrete base, stored as presheaves with identity maps only.
    pub families: Vec<Vec<Vec<String>>>,
    /// Names of presheaves added by the closure.
    pub added: Vec<String>,
    pub psh_base: FunctionCategory,
    pub fam_base: FunctionCategory,
    pub p: Arc<Doctrine>,
    pub q: Arc<Doctrine>,
    pub adjunction: DoctrineAdjunction,
    pub ql: Arc<Doctrine>,
    pub op: InteriorOp,
    /// Subpresheaf masks of each presheaf, in fiber order.
    pub subpresheaves: Vec<Vec<usize>>,
}

/// Up-set of `w` in world order.
fn up(frame: &KripkeFrame, w: usize) -> Vec<usize> {
    (0..frame.len()).filter(|&v| frame.related(w, v)).collect()
}

/// Tuples of `R(S)(w) = ∏_{v ≥ w} S(v)`, first factor most significant.
fn right_tuples(frame: &KripkeFrame, family: &[Vec<String>], w: usize) -> Vec<Vec<usize>> {
    let radices: Vec<usize> = up(frame, w).iter().map(|&v| family[v].len()).collect();
    odometer(&radices)
}

fn tuple_name(frame: &KripkeFrame, family: &[Vec<String>], w: usize, tuple: &[usize]) -> String {
    let ups = up(frame, w);
    let parts: Vec<&str> = ups
        .iter()
        .zip(tuple)
        .filter(|(&v, _)| family[v].len() != 1)
        .map(|(&v, &i)| family[v][i].as_str())
        .collect();
    match parts.len() {
        0 => ups.first().map_or("*".to_string(), |&v| family[v][tuple[0]].clone()),
        1 => parts[0].to_string(),
        _ => format!("({})", parts.join(",")),
    }
}

/// The presheaf `R(S)` with projections as restriction maps.
fn right_adjoint_object(frame: &KripkeFrame, name: String, family: &[Vec<String>]) -> Result<FinPresheaf> {
    let n = frame.len();
    let tuples: Vec<Vec<Vec<usize>>> = (0..n).map(|w| right_tuples(frame, family, w)).collect();
    let sets = (0..n)
        .map(|w| tuples[w].iter().map(|t| tuple_name(frame, family, w, t)).collect())
        .collect();
    let mut maps = Vec::new();
    for (w, v) in frame.pairs() {
        if w == v {
            continue;
        }
        let (up_w, up_v) = (up(frame, w), up(frame, v));
        let f = tuples[w]
            .iter()
            .map(|t| {
                let projected: Vec<usize> = up_v
                    .iter()
                    .map(|u| t[up_w.iter().position(|x| x == u).expect("up-sets nest")])
                    .collect();
                tuples[v].iter().position(|s| *s == projected).expect("projection")
            })
            .collect();
        maps.push((w, v, f));
    }
    FinPresheaf::new(frame, name, sets, maps)
}

/// Builds the instance on `presheaves`, closing the list under `R L`.
pub fn presheaf_instance(frame: &KripkeFrame, presheaves: Vec<FinPresheaf>) -> Result<PresheafInstance> {
    let n = frame.len();
    let mut psh = presheaves;
    let mut families: Vec<Vec<Vec<String>>> = Vec::new();
    let mut family_names: Vec<String> = Vec::new();
    let mut added = Vec::new();
    loop {
        let mut changed = false;
        for d in psh.clone() {
            if !families.contains(&d.sets) {
                families.push(d.sets.clone());
                family_names.push(format!("L{}", d.name));
                changed = true;
            }
        }
        for (i, s) in families.clone().iter().enumerate() {
            let r = right_adjoint_object(frame, format!("R{}", family_names[i]), s)?;
            if !psh.contains(&r) {
                if psh.len() >= CLOSURE_CAP {
                    return Err(Error::Closure(format!(
                        "closure under RL does not terminate: `{}` is missing",
                        r.name
                    )));
                }
                added.push(r.name.clone());
                psh.push(r);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let psh_sets: Vec<SetObject> = psh.iter().map(|d| d.as_set(frame)).collect();
    let psh_base = FunctionCategory::new(psh_sets, |s, d, f| {
        let (a, b) = (&psh[s], &psh[d]);
        (0..a.total()).all(|x| {
            let (w, i) = a.world_of(x);
            let (w2, j) = b.world_of(f[x]);
            w == w2
                && (0..n).filter(|&v| frame.related(w, v)).all(|v| {
                    let moved = a.offset(v) + a.map(n, w, v)[i];
                    f[moved] == b.offset(v) + b.map(n, w, v)[j]
                })
        })
    })?;
    let fam_presheaves: Vec<FinPresheaf> = families
        .iter()
        .zip(&family_names)
        .map(|(s, name)| FinPresheaf {
            name: name.clone(),
            sets: s.clone(),
            maps: (0..n * n)
                .map(|k| (k / n == k % n).then(|| (0..s[k / n].len()).collect()))
                .collect(),
        })
        .collect();
    let fam_sets: Vec<SetObject> = fam_presheaves.iter().map(|d| d.as_set(frame)).collect();
    let fam_base = FunctionCategory::new(fam_sets, |s, d, f| {
        (0..f.len()).all(|x| fam_presheaves[s].world_of(x).0 == fam_presheaves[d].world_of(f[x]).0)
    })?;
    let c = psh_base.category.clone();
    let dcat = fam_base.category.clone();

    let subpresheaves: Vec<Vec<usize>> = psh
        .iter()
        .map(|d| (0..1usize << d.total()).filter(|&m| is_subpresheaf(frame, d, m)).collect())
        .collect();
    let p_fibers: Vec<Arc<FinPoset>> = psh
        .iter()
        .zip(&subpresheaves)
        .map(|(d, subs)| {
            let names = subs.iter().map(|&m| family_name(&d.sets, m)).collect();
            Arc::new(FinPoset::from_fn_trusted(names, |a, b| subs[a] & !subs[b] == 0))
        })
        .collect();
    let p = Arc::new(Doctrine::from_graphs("Sub_Psh", c.clone(), p_fibers, |t| {
        let (s, d) = (c.src(t), c.dst(t));
        let f = psh_base.function(t);
        subpresheaves[d]
            .iter()
            .map(|&m| {
                let pulled = preimage(f, m);
                subpresheaves[s].iter().position(|&x| x == pulled).expect("preimage of a subpresheaf")
            })
            .collect()
    })?);
    let q_fibers: Vec<Arc<FinPoset>> = families
        .iter()
        .map(|s| {
            let total: usize = s.iter().map(Vec::len).sum();
            let names = (0..1usize << total).map(|m| family_name(s, m)).collect();
            Arc::new(FinPoset::from_fn_trusted(names, |a, b| a & !b == 0))
        })
        .collect();
    let q = Arc::new(Doctrine::from_graphs("Sub_Fam0", dcat.clone(), q_fibers, |t| {
        let f = fam_base.function(t);
        let total: usize = families[dcat.dst(t)].iter().map(Vec::len).sum();
        (0..1usize << total).map(|m| preimage(f, m)).collect()
    })?);

    // L: restriction to the discrete base.
    let l_objects: Vec<usize> = psh
        .iter()
        .map(|d| families.iter().position(|s| *s == d.sets).expect("closed under L"))
        .collect();
    let l_arrows = c
        .arrow_ids()
        .map(|t| {
            fam_base
                .arrow_for(l_objects[c.src(t)], l_objects[c.dst(t)], psh_base.function(t))
                .expect("natural maps are world-preserving")
        })
        .collect();
    let l = Functor::new(c.clone(), dcat.clone(), l_objects.clone(), l_arrows)?;

    // R: products over up-sets.
    let r_presheaves: Vec<FinPresheaf> = families
        .iter()
        .zip(&family_names)
        .map(|(s, name)| right_adjoint_object(frame, format!("R{name}"), s))
        .collect::<Result<_>>()?;
    let r_objects: Vec<usize> = r_presheaves
        .iter()
        .map(|r| psh.iter().position(|d| d == r).expect("closed under R"))
        .collect();
    let tuples: Vec<Vec<Vec<Vec<usize>>>> = families
        .iter()
        .map(|s| (0..n).map(|w| right_tuples(frame, s, w)).collect())
        .collect();
    let flat_tuple = |family: usize, x: usize| -> (usize, &Vec<usize>) {
        let target = &psh[r_objects[family]];
        let (w, i) = target.world_of(x);
        (w, &tuples[family][w][i])
    };
    let r_arrows = dcat
        .arrow_ids()
        .map(|g| {
            let (s, s2) = (dcat.src(g), dcat.dst(g));
            let func = fam_base.function(g);
            let src_obj = &psh[r_objects[s]];
            let dst_obj = &psh[r_objects[s2]];
            let mapped: Vec<usize> = (0..src_obj.total())
                .map(|x| {
                    let (w, t) = flat_tuple(s, x);
                    let image: Vec<usize> = up(frame, w)
                        .iter()
                        .zip(t)
                        .map(|(&v, &i)| {
                            let src_off: usize = families[s][..v].iter().map(Vec::len).sum();
                            let dst_off: usize = families[s2][..v].iter().map(Vec::len).sum();
                            func[src_off + i] - dst_off
                        })
                        .collect();
                    let j = tuples[s2][w].iter().position(|u| *u == image).expect("tuple");
                    dst_obj.offset(w) + j
                })
                .collect();
            psh_base
                .arrow_for(r_objects[s], r_objects[s2], &mapped)
                .ok_or_else(|| Error::Closure("R of a family map is not natural".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let r = Functor::new(dcat.clone(), c.clone(), r_objects.clone(), r_arrows)?;

    // η_D: D → R L D, x ↦ (D_wv x)_v.
    let unit_components = c
        .objects()
        .map(|i| {
            let d = &psh[i];
            let fam = l_objects[i];
            let target = &psh[r_objects[fam]];
            let f: Vec<usize> = (0..d.total())
                .map(|x| {
                    let (w, e) = d.world_of(x);
                    let t: Vec<usize> = up(frame, w).iter().map(|&v| d.map(n, w, v)[e]).collect();
                    target.offset(w) + tuples[fam][w].iter().position(|u| *u == t).expect("tuple")
                })
                .collect();
            psh_base
                .arrow_for(i, r_objects[fam], &f)
                .ok_or_else(|| Error::Closure(format!("η at `{}` is not natural", d.name)))
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = NatTransformation::new(Functor::identity(c.clone()), r.after(&l)?, unit_components)?;

    // ε_S: L R S → S, a tuple at w ↦ its w-component.
    let counit_components = dcat
        .objects()
        .map(|s| {
            let rs = r_objects[s];
            let lrs = l_objects[rs];
            let f: Vec<usize> = (0..psh[rs].total())
                .map(|x| {
                    let (w, t) = flat_tuple(s, x);
                    let pos = up(frame, w).iter().position(|&v| v == w).expect("reflexive");
                    let off: usize = families[s][..w].iter().map(Vec::len).sum();
                    off + t[pos]
                })
                .collect();
            Ok(fam_base.arrow_for(lrs, s, &f).expect("world-preserving"))
        })
        .collect::<Result<Vec<_>>>()?;
    let counit = NatTransformation::new(l.after(&r)?, Functor::identity(dcat.clone()), counit_components)?;

    let lam = OneArrow::from_graphs(p.clone(), q.clone(), l.clone(), |i| subpresheaves[i].clone())?;
    let rho = OneArrow::from_graphs(q.clone(), p.clone(), r.clone(), |s| {
        let target = r_objects[s];
        let total: usize = families[s].iter().map(Vec::len).sum();
        (0..1usize << total)
            .map(|beta| {
                let mut m = 0;
                for x in 0..psh[target].total() {
                    let (w, t) = flat_tuple(s, x);
                    let inside = up(frame, w).iter().zip(t).all(|(&v, &i)| {
                        let off: usize = families[s][..v].iter().map(Vec::len).sum();
                        beta >> (off + i) & 1 == 1
                    });
                    if inside {
                        m |= 1 << x;
                    }
                }
                subpresheaves[target].iter().position(|&y| y == m).expect("ρ lands in subpresheaves")
            })
            .collect()
    })?;
    let adjunction = DoctrineAdjunction::new(lam, rho, unit, counit)?;
    let (ql, op) = am_modality(&adjunction)?;
    Ok(PresheafInstance {
        frame: frame.clone(),
        presheaves: psh,
        families,
        added,
        psh_base,
        fam_base,
        p,
        q,
        adjunction,
        ql,
        op,
        subpresheaves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn chain2() -> KripkeFrame {
        KripkeFrame::reflexive(&["w1", "w2"], &[("w1", "w2")]).unwrap()
    }

    fn collapsing(frame: &KripkeFrame) -> FinPresheaf {
        FinPresheaf::new(frame, "D", vec![strs(&["a", "b"]), strs(&["*"])], vec![(0, 1, vec![0, 0])]).unwrap()
    }

    #[test]
    fn functoriality_is_checked() {
        let f = KripkeFrame::reflexive(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        let two = strs(&["x", "y"]);
        let bad = FinPresheaf::new(
            &f,
            "B",
            vec![two.clone(), two.clone(), two],
            vec![(0, 1, vec![1, 0]), (1, 2, vec![1, 0]), (0, 2, vec![1, 0])],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn local_box_matches_oracle_on_constant_presheaf() {
        let f = chain2();
        let d = FinPresheaf::constant(&f, "K", &["a", "b"]).unwrap();
        // α = ({a}; {a,b}) has bits a@w1 = 0, a@w2 = 2, b@w2 = 3
        let alpha = 0b1101;
        assert_eq!(presheaf_box_local(&f, &d, alpha), 0b1101);
        assert_eq!(presheaf_box_oracle(&f, &d, alpha), 0b1101);
        // α = ({a,b}; {a}) keeps only a
        assert_eq!(presheaf_box_local(&f, &d, 0b0111), 0b0101);
        for a in 0..16 {
            assert_eq!(presheaf_box_local(&f, &d, a), presheaf_box_oracle(&f, &d, a));
        }
        let op = local_presheaf_op(&f, &d).unwrap();
        assert!(op.check().is_empty());
        // growth under RL stops the closure
        assert!(matches!(presheaf_instance(&f, vec![d]), Err(Error::Closure(_))));
    }

    #[test]
    fn one_world_instance_is_trivial() {
        let f = KripkeFrame::reflexive(&["w"], &[]).unwrap();
        let d = FinPresheaf::constant(&f, "D", &["a", "b"]).unwrap();
        let inst = presheaf_instance(&f, vec![d]).unwrap();
        assert!(inst.added.is_empty());
        assert!(inst.adjunction.check().unwrap().is_empty());
        assert!(inst.op.is_identity());
    }

    #[test]
    fn two_chain_instance() {
        let f = chain2();
        let one = FinPresheaf::constant(&f, "1", &["*"]).unwrap();
        let inst = presheaf_instance(&f, vec![collapsing(&f), one]).unwrap();
        assert!(inst.added.is_empty(), "{:?}", inst.added);
        assert_eq!(inst.p.fiber(0).len(), 5);
        assert!(inst.adjunction.check().unwrap().is_empty());
        assert!(inst.op.check().is_empty());
        for x in inst.ql.base().objects() {
            let d = &inst.presheaves[x];
            for a in inst.ql.fiber(x).elements() {
                assert_eq!(inst.op.apply(x, a), presheaf_box_oracle(&f, d, a));
            }
            let stable = inst.op.stable_elements(x);
            let subs: Vec<usize> = (0..1 << d.total()).filter(|&m| is_subpresheaf(&f, d, m)).collect();
            assert_eq!(stable, subs);
        }
    }
}
