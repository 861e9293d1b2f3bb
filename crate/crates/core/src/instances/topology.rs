//! Finite topological spaces, the interior operator, and the forgetful 1-arrow to bare subsets.

use std::sync::Arc;

use crate::adjunction::ModalArrow;
use crate::doctrine::{Doctrine, OneArrow};
use crate::error::{Error, Result};
use crate::fincat::Functor;
use crate::interior::InteriorOp;
use crate::order::subset_name;

use super::{image, powerset_doctrine, preimage, FunctionCategory, SetObject};

/// Points with a family of open sets given as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopSpace {
    pub name: String,
    pub points: Vec<String>,
    opens: Vec<usize>,
}

impl FiniteTopSpace {
    /// Validates that the opens contain `∅` and the whole set and are closed under `∪` and `∩`.
    pub fn new(name: impl Into<String>, points: &[&str], opens: &[&[&str]]) -> Result<FiniteTopSpace> {
        let name = name.into();
        let points: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        if points.len() > 12 {
            return Err(Error::TooLarge {
                what: format!("points of `{name}`"),
                needed: points.len() as u128,
                cap: 12,
            });
        }
        let mut masks = opens
            .iter()
            .map(|o| {
                o.iter().try_fold(0usize, |acc, p| {
                    let i = points
                        .iter()
                        .position(|q| q == p)
                        .ok_or_else(|| Error::Unknown(format!("point `{p}` in `{name}`")))?;
                    Ok(acc | 1 << i)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        masks.sort_unstable();
        masks.dedup();
        let full = (1usize << points.len()) - 1;
        let has = |m: usize| masks.binary_search(&m).is_ok();
        if !has(0) || !has(full) {
            return Err(Error::Invalid(format!("`{name}` must contain ∅ and the whole space as opens")));
        }
        for &a in &masks {
            for &b in &masks {
                if !has(a | b) || !has(a & b) {
                    return Err(Error::Invalid(format!(
                        "opens of `{name}` not closed under ∪/∩ at {} and {}",
                        subset_name(&points, a as u64),
                        subset_name(&points, b as u64)
                    )));
                }
            }
        }
        Ok(FiniteTopSpace {
            name,
            points,
            opens: masks,
        })
    }

    pub fn discrete(name: impl Into<String>, points: &[&str]) -> FiniteTopSpace {
        let n = points.len();
        FiniteTopSpace {
            name: name.into(),
            points: points.iter().map(|s| s.to_string()).collect(),
            opens: (0..1usize << n).collect(),
        }
    }

    pub fn indiscrete(name: impl Into<String>, points: &[&str]) -> FiniteTopSpace {
        let n = points.len();
        let mut opens = vec![0, (1usize << n) - 1];
        opens.dedup();
        FiniteTopSpace {
            name: name.into(),
            points: points.iter().map(|s| s.to_string()).collect(),
            opens,
        }
    }

    /// `{⊥, ⊤}` with opens `∅, {⊤}, {⊥,⊤}`.
    pub fn sierpinski() -> FiniteTopSpace {
        FiniteTopSpace::new("S", &["⊥", "⊤"], &[&[], &["⊤"], &["⊥", "⊤"]]).expect("Sierpiński space")
    }

    pub fn opens(&self) -> &[usize] {
        &self.opens
    }

    pub fn is_open(&self, a: usize) -> bool {
        self.opens.binary_search(&a).is_ok()
    }

    /// The largest open contained in `a`.
    pub fn interior(&self, a: usize) -> usize {
        self.opens.iter().filter(|&&o| o & !a == 0).fold(0, |acc, &o| acc | o)
    }

    pub fn is_continuous(&self, target: &FiniteTopSpace, f: &[usize]) -> bool {
        target.opens.iter().all(|&o| self.is_open(preimage(f, o)))
    }

    pub fn is_open_map(&self, target: &FiniteTopSpace, f: &[usize]) -> bool {
        self.opens.iter().all(|&o| target.is_open(image(f, o)))
    }

    fn as_set(&self) -> SetObject {
        SetObject {
            name: self.name.clone(),
            elements: self.points.clone(),
        }
    }
}

/// Subsets `B` of the target with `f⁻¹(int B) ≠ int(f⁻¹ B)`.
pub fn interior_naturality_failures(src: &FiniteTopSpace, dst: &FiniteTopSpace, f: &[usize]) -> Vec<usize> {
    (0..1usize << dst.points.len())
        .filter(|&b| preimage(f, dst.interior(b)) != src.interior(preimage(f, b)))
        .collect()
}

/// Spaces with open continuous maps, the powerset doctrine on them, and the interior operator.
#[derive(Clone, Debug)]
pub struct TopInstance {
    pub spaces: Vec<FiniteTopSpace>,
    pub base: FunctionCategory,
    pub doctrine: Arc<Doctrine>,
    pub op: InteriorOp,
}

pub fn topological_doctrine(spaces: Vec<FiniteTopSpace>) -> Result<TopInstance> {
    let sets = spaces.iter().map(FiniteTopSpace::as_set).collect();
    let base = FunctionCategory::new(sets, |s, d, f| {
        spaces[s].is_continuous(&spaces[d], f) && spaces[s].is_open_map(&spaces[d], f)
    })?;
    let doctrine = powerset_doctrine("P_top", &base)?;
    let op = InteriorOp::from_graphs(doctrine.clone(), |x| {
        (0..1usize << spaces[x].points.len()).map(|a| spaces[x].interior(a)).collect()
    })?;
    Ok(TopInstance {
        spaces,
        base,
        doctrine,
        op,
    })
}

/// `⟨U, id⟩: ⟨P, int⟩ → ⟨pw, Id⟩` into the powerset doctrine over all functions between the same point sets.
pub fn forgetful_top_arrow(top: &TopInstance) -> Result<ModalArrow> {
    let sets = top.spaces.iter().map(FiniteTopSpace::as_set).collect();
    let all = FunctionCategory::finset(sets)?;
    let pw = powerset_doctrine("pw", &all)?;
    let c = top.base.category.clone();
    let arrows = c
        .arrow_ids()
        .map(|t| all.arrow_for(c.src(t), c.dst(t), top.base.function(t)).expect("every function"))
        .collect();
    let functor = Functor::new(c.clone(), all.category.clone(), c.objects().collect(), arrows)?;
    let arrow = OneArrow::from_graphs(top.doctrine.clone(), pw.clone(), functor, |x| {
        top.doctrine.fiber(x).elements().collect()
    })?;
    Ok(ModalArrow {
        arrow,
        source: top.op.clone(),
        target: InteriorOp::identity(pw),
    })
}
