//! Concrete doctrines: Kripke, indexed families, topology, quantales, presheaves and connectives.
//!
//! Set-indexed bases are finite full subcategories whose arrows are enumerated functions.

pub mod connectives;
pub mod kripke;
pub mod presheaf;
pub mod quantale;
pub mod topology;

use std::collections::HashMap;
use std::sync::Arc;

use crate::doctrine::Doctrine;
use crate::enumerate::{odometer, odometer_len};
use crate::error::{Error, Result};
use crate::fincat::{Arrow, FinCategory};
use crate::order::{powerset_poset, FinPoset};

/// Largest number of candidate functions enumerated for one base category.
pub const FUNCTION_CAP: u128 = 50_000;

/// Largest fiber built for exponential doctrines `H^X`.
pub const FIBER_CAP: u128 = 4_096;

/// A named finite set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetObject {
    pub name: String,
    pub elements: Vec<String>,
}

impl SetObject {
    pub fn new(name: impl Into<String>, elements: &[&str]) -> SetObject {
        SetObject {
            name: name.into(),
            elements: elements.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// A category of finite sets whose arrows are the admissible functions between them.
#[derive(Clone, Debug)]
pub struct FunctionCategory {
    pub category: Arc<FinCategory>,
    pub sets: Vec<SetObject>,
    functions: Vec<Vec<usize>>,
    lookup: HashMap<(usize, usize, Vec<usize>), usize>,
}

impl FunctionCategory {
    /// Enumerates every function between the given sets and keeps the admissible ones.
    ///
    /// Admissible functions must contain identities and be closed under composition.
    pub fn new(
        sets: Vec<SetObject>,
        admissible: impl Fn(usize, usize, &[usize]) -> bool,
    ) -> Result<FunctionCategory> {
        let n = sets.len();
        let mut needed: u128 = 0;
        for s in &sets {
            for d in &sets {
                needed = needed.saturating_add(odometer_len(&vec![d.len(); s.len()]));
            }
        }
        if needed > FUNCTION_CAP {
            return Err(Error::TooLarge {
                what: "functions between the bundled sets".into(),
                needed,
                cap: FUNCTION_CAP,
            });
        }
        let mut arrows = Vec::new();
        let mut functions = Vec::new();
        let mut lookup = HashMap::new();
        for s in 0..n {
            for d in 0..n {
                for f in odometer(&vec![sets[d].len(); sets[s].len()]) {
                    if !admissible(s, d, &f) {
                        continue;
                    }
                    let images: Vec<&str> = f.iter().map(|&i| sets[d].elements[i].as_str()).collect();
                    lookup.insert((s, d, f.clone()), arrows.len());
                    arrows.push(Arrow {
                        name: format!("{}->{}[{}]", sets[s].name, sets[d].name, images.join(",")),
                        src: s,
                        dst: d,
                    });
                    functions.push(f);
                }
            }
        }
        let identity = (0..n)
            .map(|x| {
                let id: Vec<usize> = (0..sets[x].len()).collect();
                lookup
                    .get(&(x, x, id))
                    .copied()
                    .ok_or_else(|| Error::Closure(format!("identity on `{}` is not admissible", sets[x].name)))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = HashMap::new();
        for (f, first) in functions.iter().enumerate() {
            for (g, second) in functions.iter().enumerate() {
                if arrows[f].dst != arrows[g].src {
                    continue;
                }
                let h: Vec<usize> = first.iter().map(|&i| second[i]).collect();
                let key = (arrows[f].src, arrows[g].dst, h);
                let composite = *lookup.get(&key).ok_or_else(|| {
                    Error::Closure(format!(
                        "{} ∘ {} is not admissible",
                        arrows[g].name, arrows[f].name
                    ))
                })?;
                table.insert((g, f), composite);
            }
        }
        let objects = sets.iter().map(|s| s.name.clone()).collect();
        let category = Arc::new(FinCategory::from_composition(objects, arrows, identity, |g, f| table[&(g, f)])?);
        Ok(FunctionCategory {
            category,
            sets,
            functions,
            lookup,
        })
    }

    /// All functions between the sets.
    pub fn finset(sets: Vec<SetObject>) -> Result<FunctionCategory> {
        FunctionCategory::new(sets, |_, _, _| true)
    }

    pub fn function(&self, arrow: usize) -> &[usize] {
        &self.functions[arrow]
    }

    pub fn arrow_for(&self, src: usize, dst: usize, function: &[usize]) -> Option<usize> {
        self.lookup.get(&(src, dst, function.to_vec())).copied()
    }

    pub fn size(&self, x: usize) -> usize {
        self.sets[x].len()
    }
}

/// Functions `X → H` encoded in mixed radix: `α ↦ Σ α(x)·|H|^x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exponent {
    pub base: usize,
    pub len: usize,
}

impl Exponent {
    pub fn count(&self) -> usize {
        self.base.pow(self.len as u32)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len);
        for _ in 0..self.len {
            out.push(index % self.base);
            index /= self.base;
        }
        out
    }

    pub fn encode(&self, values: &[usize]) -> usize {
        values.iter().rev().fold(0, |acc, &v| acc * self.base + v)
    }

    /// Postcomposition with an endomap of `H`.
    pub fn pointwise(&self, f: impl Fn(usize) -> usize) -> Vec<usize> {
        (0..self.count())
            .map(|a| {
                let values: Vec<usize> = self.decode(a).into_iter().map(&f).collect();
                self.encode(&values)
            })
            .collect()
    }
}

/// `H^X` ordered pointwise, named by value lists.
pub fn exponential_poset(h: &FinPoset, len: usize) -> Result<(FinPoset, Exponent)> {
    let e = Exponent { base: h.len(), len };
    let needed = odometer_len(&vec![h.len(); len]);
    if needed > FIBER_CAP {
        return Err(Error::TooLarge {
            what: "exponential fiber".into(),
            needed,
            cap: FIBER_CAP,
        });
    }
    let names = (0..e.count())
        .map(|a| {
            let parts: Vec<&str> = e.decode(a).into_iter().map(|v| h.name(v)).collect();
            format!("[{}]", parts.join(","))
        })
        .collect();
    let poset = FinPoset::from_fn_trusted(names, |a, b| {
        e.decode(a).into_iter().zip(e.decode(b)).all(|(x, y)| h.leq(x, y))
    });
    Ok((poset, e))
}

/// The doctrine `X ↦ H^X` with reindexing by precomposition.
pub fn exponential_doctrine(
    name: impl Into<String>,
    base: &FunctionCategory,
    h: &FinPoset,
) -> Result<(Arc<Doctrine>, Vec<Exponent>)> {
    let c = base.category.clone();
    let mut fibers = Vec::new();
    let mut shapes = Vec::new();
    for x in c.objects() {
        let (poset, e) = exponential_poset(h, base.size(x))?;
        fibers.push(Arc::new(poset));
        shapes.push(e);
    }
    let doctrine = Doctrine::from_graphs(name, c.clone(), fibers, |t| {
        let (x, y) = (c.src(t), c.dst(t));
        let f = base.function(t);
        (0..shapes[y].count())
            .map(|a| {
                let values = shapes[y].decode(a);
                shapes[x].encode(&f.iter().map(|&i| values[i]).collect::<Vec<_>>())
            })
            .collect()
    })?;
    Ok((Arc::new(doctrine), shapes))
}

/// Subsets as bitmasks with reindexing by inverse image.
pub fn powerset_doctrine(name: impl Into<String>, base: &FunctionCategory) -> Result<Arc<Doctrine>> {
    let c = base.category.clone();
    let fibers: Vec<Arc<FinPoset>> = base.sets.iter().map(|s| Arc::new(powerset_poset(&s.elements))).collect();
    Ok(Arc::new(Doctrine::from_graphs(name, c.clone(), fibers, |t| {
        let f = base.function(t);
        (0..1usize << base.size(c.dst(t))).map(|b| preimage(f, b)).collect()
    })?))
}

/// `f⁻¹(B)` for `B` a bitmask over the codomain.
pub fn preimage(f: &[usize], b: usize) -> usize {
    f.iter()
        .enumerate()
        .filter(|(_, &y)| b >> y & 1 == 1)
        .fold(0, |acc, (x, _)| acc | 1 << x)
}

/// `f(A)` for `A` a bitmask over the domain.
pub fn image(f: &[usize], a: usize) -> usize {
    f.iter()
        .enumerate()
        .filter(|(x, _)| a >> x & 1 == 1)
        .fold(0, |acc, (_, &y)| acc | 1 << y)
}
