//! Turning a parsed document into core objects, in declaration order.

use std::cell::Cell;
use std::collections::HashMap;
use std::sync::Arc;

use modaldoc::adjunction::am_modality;
use modaldoc::bundled::set_fragment;
use modaldoc::comonad::{cm_modality, cmd_of_adjunction, em_adjunction, em_doctrine, ma, mc};
use modaldoc::fincat::{check_category, CategoryData};
use modaldoc::instances::connectives::{conjunction_modality, forall_modality};
use modaldoc::instances::kripke::{fam_doctrine, kripke_doctrine, IndexedFamily, KripkeFrame};
use modaldoc::instances::presheaf::{local_presheaf_op, presheaf_instance, FinPresheaf};
use modaldoc::instances::quantale::{quantale_doctrine, FiniteQuantale};
use modaldoc::instances::topology::{topological_doctrine, FiniteTopSpace};
use modaldoc::instances::SetObject;
use modaldoc::order::check_poset;
use modaldoc::temporal::temporal_doctrine;
use modaldoc::{
    BranchLift, Doctrine, DoctrineAdjunction, DoctrineComonad, FCoalgebra, FinCategory, FinPoset, InteriorOp,
    MonotoneMap,
};

use crate::document::{Atom, Block, Document, Entry};
use crate::error::CliError;

/// Default for `--max-size`: total fiber elements of any constructed doctrine.
pub const DEFAULT_MAX_SIZE: usize = 20_000;

#[derive(Clone, Debug)]
pub struct PresheafDecl {
    pub frame_name: String,
    pub frame: KripkeFrame,
    pub presheaf: FinPresheaf,
}

/// A temporal query: the fixed point of `lift` on `coalgebra` below `alpha`.
#[derive(Clone, Debug)]
pub struct Query {
    pub coalgebra: FCoalgebra,
    pub lift: BranchLift,
    pub alpha: u64,
    pub expect: Option<u64>,
}

#[derive(Clone, Debug)]
pub enum Object {
    Poset(Arc<FinPoset>),
    Category(Arc<FinCategory>),
    Doctrine(Arc<Doctrine>),
    Frame(KripkeFrame),
    Space(FiniteTopSpace),
    Quantale(FiniteQuantale),
    Presheaf(PresheafDecl),
    Coalgebra(FCoalgebra),
    Interior(InteriorOp),
    Adjunction(Arc<DoctrineAdjunction>),
    Comonad(DoctrineComonad),
    Query(Query),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Poset(_) => "poset",
            Object::Category(_) => "category",
            Object::Doctrine(_) => "doctrine",
            Object::Frame(_) => "kripke-frame",
            Object::Space(_) => "topspace",
            Object::Quantale(_) => "quantale",
            Object::Presheaf(_) => "presheaf",
            Object::Coalgebra(_) => "coalgebra",
            Object::Interior(_) => "interior",
            Object::Adjunction(_) => "adjunction",
            Object::Comonad(_) => "comonad",
            Object::Query(_) => "query",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Declaration {
    pub name: String,
    pub line: usize,
    pub object: Object,
}

#[derive(Clone, Debug, Default)]
pub struct Model {
    pub declarations: Vec<Declaration>,
    index: HashMap<String, usize>,
}

pub fn parse_lift(text: &str) -> Option<BranchLift> {
    match text {
        "G" => Some(BranchLift::Identity),
        "AG" => Some(BranchLift::Forall),
        "EG" => Some(BranchLift::Exists),
        _ => None,
    }
}

/// Entries of one block, tracking which were read so leftovers can be rejected.
struct Fields<'a> {
    block: &'a Block,
    used: Vec<Cell<bool>>,
}

impl<'a> Fields<'a> {
    fn new(block: &'a Block) -> Fields<'a> {
        Fields {
            block,
            used: block.entries.iter().map(|_| Cell::new(false)).collect(),
        }
    }

    fn malformed(&self, message: impl Into<String>) -> CliError {
        CliError::Malformed {
            kind: self.block.kind.clone(),
            block: self.block.name.clone(),
            line: self.block.line,
            message: message.into(),
        }
    }

    fn core<T>(&self, result: modaldoc::Result<T>) -> Result<T, CliError> {
        result.map_err(|e| self.malformed(e.to_string()))
    }

    fn entry(&self, key: &str) -> Result<Option<&'a Entry>, CliError> {
        let mut found = None;
        for (i, e) in self.block.entries.iter().enumerate() {
            if e.key.len() == 1 && e.key[0] == key {
                if found.is_some() {
                    return Err(self.malformed(format!("key `{key}` given twice")));
                }
                self.used[i].set(true);
                found = Some(e);
            }
        }
        Ok(found)
    }

    fn opt_words(&self, key: &str) -> Result<Option<Vec<&'a str>>, CliError> {
        self.entry(key)?.map(|e| self.words_of(e)).transpose()
    }

    fn words(&self, key: &str) -> Result<Vec<&'a str>, CliError> {
        self.opt_words(key)?.ok_or_else(|| self.malformed(format!("missing `{key}`")))
    }

    fn opt_one(&self, key: &str) -> Result<Option<&'a str>, CliError> {
        match self.opt_words(key)? {
            None => Ok(None),
            Some(w) if w.len() == 1 => Ok(Some(w[0])),
            Some(_) => Err(self.malformed(format!("`{key}` takes exactly one value"))),
        }
    }

    fn one(&self, key: &str) -> Result<&'a str, CliError> {
        self.opt_one(key)?.ok_or_else(|| self.malformed(format!("missing `{key}`")))
    }

    fn opt_sets(&self, key: &str) -> Result<Option<Vec<Vec<String>>>, CliError> {
        self.entry(key)?.map(|e| self.sets_of(e)).transpose()
    }

    /// Entries whose key starts with `head`, with the remaining key words.
    fn keyed(&self, head: &str) -> Vec<(&'a [String], &'a Entry)> {
        let mut out = Vec::new();
        for (i, e) in self.block.entries.iter().enumerate() {
            if e.key.len() > 1 && e.key[0] == head {
                self.used[i].set(true);
                out.push((&e.key[1..], e));
            }
        }
        out
    }

    fn words_of(&self, e: &'a Entry) -> Result<Vec<&'a str>, CliError> {
        e.values
            .iter()
            .map(|a| match a {
                Atom::Word(w) => Ok(w.as_str()),
                Atom::Set(_) => Err(self.malformed(format!("`{}` expects words, found a set", e.key.join(" ")))),
            })
            .collect()
    }

    fn sets_of(&self, e: &Entry) -> Result<Vec<Vec<String>>, CliError> {
        e.values
            .iter()
            .map(|a| match a {
                Atom::Set(s) => Ok(s.clone()),
                Atom::Word(w) => Err(self.malformed(format!("`{}` expects sets, found `{w}`", e.key.join(" ")))),
            })
            .collect()
    }

    fn relation(&self, atom: &'a str) -> Result<(&'a str, &'a str), CliError> {
        atom.split_once("->")
            .filter(|(a, b)| !a.is_empty() && !b.is_empty())
            .ok_or_else(|| self.malformed(format!("`{atom}` is not a relation `a->b`")))
    }

    fn relations(&self, key: &str) -> Result<Vec<(&'a str, &'a str)>, CliError> {
        let words = self.opt_words(key)?.unwrap_or_default();
        words.into_iter().map(|w| self.relation(w)).collect()
    }

    fn finish(&self) -> Result<(), CliError> {
        match self.used.iter().position(|u| !u.get()) {
            Some(i) => Err(self.malformed(format!("unknown key `{}`", self.block.entries[i].key.join(" ")))),
            None => Ok(()),
        }
    }
}

/// Closes `pairs` over `n` items reflexively and, if asked, transitively.
fn close(n: usize, pairs: &[(usize, usize)], transitive: bool) -> Vec<(usize, usize)> {
    let mut rel = vec![false; n * n];
    for &(a, b) in pairs {
        rel[a * n + b] = true;
    }
    for i in 0..n {
        rel[i * n + i] = true;
    }
    if transitive {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i * n + k] && rel[k * n + j] {
                        rel[i * n + j] = true;
                    }
                }
            }
        }
    }
    (0..n * n).filter(|&k| rel[k]).map(|k| (k / n, k % n)).collect()
}

fn position(f: &Fields, names: &[&str], name: &str, what: &str) -> Result<usize, CliError> {
    names
        .iter()
        .position(|n| *n == name)
        .ok_or_else(|| f.malformed(format!("`{name}` is not a {what}")))
}

impl Model {
    /// Builds every declaration, refusing doctrines with more than `max_size` fiber elements.
    pub fn load(doc: &Document, max_size: usize) -> Result<Model, CliError> {
        let mut model = Model::default();
        for block in &doc.blocks {
            let fields = Fields::new(block);
            let object = model.build(&fields, max_size)?;
            fields.finish()?;
            model.index.insert(block.name.clone(), model.declarations.len());
            model.declarations.push(Declaration {
                name: block.name.clone(),
                line: block.line,
                object,
            });
        }
        Ok(model)
    }

    pub fn get(&self, name: &str) -> Option<&Declaration> {
        self.index.get(name).map(|&i| &self.declarations[i])
    }

    fn lookup(&self, f: &Fields, name: &str) -> Result<&Object, CliError> {
        self.get(name).map(|d| &d.object).ok_or_else(|| CliError::Unresolved {
            name: name.to_string(),
            block: f.block.name.clone(),
            line: f.block.line,
        })
    }

    fn build(&self, f: &Fields, max_size: usize) -> Result<Object, CliError> {
        let object = match f.block.kind.as_str() {
            "poset" => Object::Poset(Arc::new(self.poset(f)?)),
            "category" => Object::Category(Arc::new(self.category(f)?)),
            "doctrine" => Object::Doctrine(Arc::new(self.doctrine(f)?)),
            "kripke-frame" => Object::Frame(self.frame(f)?),
            "topspace" => Object::Space(self.space(f)?),
            "quantale" => Object::Quantale(self.quantale(f)?),
            "presheaf" => Object::Presheaf(self.presheaf(f)?),
            "coalgebra" => Object::Coalgebra(self.coalgebra(f)?),
            "interior" => Object::Interior(self.interior(f)?),
            "adjunction" => Object::Adjunction(Arc::new(self.adjunction(f)?)),
            "comonad" => Object::Comonad(self.comonad(f)?),
            "query" => Object::Query(self.query(f)?),
            other => return Err(f.malformed(format!("unknown block kind `{other}`"))),
        };
        let size = match &object {
            Object::Doctrine(d) => d.size(),
            Object::Interior(op) => op.doctrine().size(),
            Object::Adjunction(a) => a.p().size() + a.q().size(),
            Object::Comonad(c) => c.doctrine().size(),
            _ => 0,
        };
        if size > max_size {
            return Err(CliError::Refused {
                what: f.block.name.clone(),
                size,
                cap: max_size,
            });
        }
        Ok(object)
    }

    fn poset(&self, f: &Fields) -> Result<FinPoset, CliError> {
        let elements = f.words("elements")?;
        let mut pairs = Vec::new();
        for (a, b) in f.relations("leq")? {
            pairs.push((position(f, &elements, a, "element")?, position(f, &elements, b, "element")?));
        }
        let transitive = match f.opt_one("closure")?.unwrap_or("refl") {
            "refl" => false,
            "refl-trans" => true,
            other => return Err(f.malformed(format!("poset closure `{other}` is not refl or refl-trans"))),
        };
        let closed: Vec<(&str, &str)> = close(elements.len(), &pairs, transitive)
            .into_iter()
            .map(|(a, b)| (elements[a], elements[b]))
            .collect();
        f.core(check_poset(&elements, &closed))
    }

    fn category(&self, f: &Fields) -> Result<FinCategory, CliError> {
        let mut data = CategoryData {
            objects: f.words("objects")?.into_iter().map(String::from).collect(),
            ..CategoryData::default()
        };
        for (rest, e) in f.keyed("arrow") {
            let name = name_of(f, rest, "arrow")?;
            match f.words_of(e)?.as_slice() {
                [rel] => {
                    let (s, d) = f.relation(rel)?;
                    data.arrows.push((name.into(), s.into(), d.into()));
                }
                _ => return Err(f.malformed(format!("arrow `{name}` needs one `src->dst`"))),
            }
        }
        for (rest, e) in f.keyed("identity") {
            let object = name_of(f, rest, "identity")?;
            match f.words_of(e)?.as_slice() {
                [arrow] => data.identities.push((object.into(), arrow.to_string())),
                _ => return Err(f.malformed(format!("identity at `{object}` needs one arrow"))),
            }
        }
        for (rest, e) in f.keyed("compose") {
            let (g, h) = match rest {
                [g, h] => (g, h),
                _ => return Err(f.malformed("`compose g f: h` names two arrows")),
            };
            match f.words_of(e)?.as_slice() {
                [gh] => data.compose.push((g.clone(), h.clone(), gh.to_string())),
                _ => return Err(f.malformed(format!("composite `{g} {h}` needs one arrow"))),
            }
        }
        f.core(check_category(&data))
    }

    fn doctrine(&self, f: &Fields) -> Result<Doctrine, CliError> {
        let base_name = f.one("base")?;
        let base = match self.lookup(f, base_name)? {
            Object::Category(c) => c.clone(),
            other => return Err(wrong_kind(f, base_name, other, "category")),
        };
        let mut fibers: Vec<Option<Arc<FinPoset>>> = vec![None; base.num_objects()];
        for (rest, e) in f.keyed("fiber") {
            let x = name_of(f, rest, "fiber")?;
            let xi = base.object_index(x).ok_or_else(|| f.malformed(format!("`{x}` is not an object of `{base_name}`")))?;
            let poset_name = match f.words_of(e)?.as_slice() {
                [p] => *p,
                _ => return Err(f.malformed(format!("fiber at `{x}` names one poset"))),
            };
            fibers[xi] = Some(match self.lookup(f, poset_name)? {
                Object::Poset(p) => p.clone(),
                other => return Err(wrong_kind(f, poset_name, other, "poset")),
            });
        }
        let fibers = fibers
            .into_iter()
            .enumerate()
            .map(|(x, p)| p.ok_or_else(|| f.malformed(format!("no fiber at `{}`", base.object_name(x)))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut graphs: HashMap<usize, &Entry> = HashMap::new();
        for (rest, e) in f.keyed("reindex") {
            let t = name_of(f, rest, "reindex")?;
            let ti = base.arrow_index(t).ok_or_else(|| f.malformed(format!("`{t}` is not an arrow of `{base_name}`")))?;
            graphs.insert(ti, e);
        }
        let mut reindex = Vec::new();
        for t in base.arrow_ids() {
            let (src, dst) = (fibers[base.dst(t)].clone(), fibers[base.src(t)].clone());
            let map = match graphs.get(&t) {
                Some(e) => {
                    let pairs: Vec<(&str, &str)> = f.words_of(e)?.into_iter().map(|w| f.relation(w)).collect::<Result<_, _>>()?;
                    f.core(MonotoneMap::from_names(src, dst, &pairs))?
                }
                None if base.is_identity(t) => MonotoneMap::identity(src),
                None => return Err(f.malformed(format!("no reindexing along `{}`", base.arrow_name(t)))),
            };
            reindex.push(map);
        }
        let d = f.core(Doctrine::new(f.block.name.clone(), base, fibers, reindex))?;
        Ok(d)
    }

    fn frame(&self, f: &Fields) -> Result<KripkeFrame, CliError> {
        let worlds = f.words("worlds")?;
        let mut pairs = Vec::new();
        for (a, b) in f.relations("rel")? {
            pairs.push((position(f, &worlds, a, "world")?, position(f, &worlds, b, "world")?));
        }
        let pairs = match f.opt_one("closure")?.unwrap_or("none") {
            "none" => pairs,
            "refl" => close(worlds.len(), &pairs, false),
            "refl-trans" => close(worlds.len(), &pairs, true),
            other => return Err(f.malformed(format!("frame closure `{other}` is not none, refl or refl-trans"))),
        };
        f.core(KripkeFrame::new(worlds.iter().map(|w| w.to_string()).collect(), &pairs))
    }

    fn space(&self, f: &Fields) -> Result<FiniteTopSpace, CliError> {
        let name = f.block.name.clone();
        if let Some(preset) = f.opt_one("preset")? {
            return match preset {
                "sierpinski" => Ok(FiniteTopSpace::sierpinski()),
                "discrete" => Ok(FiniteTopSpace::discrete(name, &f.words("points")?)),
                "indiscrete" => Ok(FiniteTopSpace::indiscrete(name, &f.words("points")?)),
                other => Err(f.malformed(format!("unknown topology preset `{other}`"))),
            };
        }
        let points = f.words("points")?;
        let opens = f.opt_sets("opens")?.ok_or_else(|| f.malformed("missing `opens`"))?;
        let opens: Vec<Vec<&str>> = opens.iter().map(|o| o.iter().map(String::as_str).collect()).collect();
        let refs: Vec<&[&str]> = opens.iter().map(Vec::as_slice).collect();
        f.core(FiniteTopSpace::new(name, &points, &refs))
    }

    fn quantale(&self, f: &Fields) -> Result<FiniteQuantale, CliError> {
        match f.one("preset")? {
            "boolean" => Ok(FiniteQuantale::boolean()),
            "lukasiewicz3" => Ok(FiniteQuantale::lukasiewicz3()),
            "z2" => Ok(FiniteQuantale::z2_powerset()),
            other => Err(f.malformed(format!("unknown quantale preset `{other}`"))),
        }
    }

    fn presheaf(&self, f: &Fields) -> Result<PresheafDecl, CliError> {
        let frame_name = f.one("frame")?;
        let frame = match self.lookup(f, frame_name)? {
            Object::Frame(k) => k.clone(),
            other => return Err(wrong_kind(f, frame_name, other, "kripke-frame")),
        };
        let worlds: Vec<&str> = frame.worlds().iter().map(String::as_str).collect();
        let name = f.block.name.clone();
        let presheaf = if let Some(elements) = f.opt_words("constant")? {
            f.core(FinPresheaf::constant(&frame, name, &elements))?
        } else {
            let mut sets: Vec<Option<Vec<String>>> = vec![None; worlds.len()];
            for (rest, e) in f.keyed("at") {
                let w = position(f, &worlds, name_of(f, rest, "at")?, "world")?;
                sets[w] = Some(f.words_of(e)?.into_iter().map(String::from).collect());
            }
            let sets = sets
                .into_iter()
                .enumerate()
                .map(|(w, s)| s.ok_or_else(|| f.malformed(format!("no set at `{}`", worlds[w]))))
                .collect::<Result<Vec<_>, _>>()?;
            let mut maps = Vec::new();
            for (rest, e) in f.keyed("map") {
                let (w, v) = match rest {
                    [w, v] => (position(f, &worlds, w, "world")?, position(f, &worlds, v, "world")?),
                    _ => return Err(f.malformed("`map w v` names two worlds")),
                };
                let mut graph = vec![usize::MAX; sets[w].len()];
                for atom in f.words_of(e)? {
                    let (a, b) = f.relation(atom)?;
                    let ai = sets[w].iter().position(|s| s == a).ok_or_else(|| f.malformed(format!("`{a}` is not at `{}`", worlds[w])))?;
                    let bi = sets[v].iter().position(|s| s == b).ok_or_else(|| f.malformed(format!("`{b}` is not at `{}`", worlds[v])))?;
                    graph[ai] = bi;
                }
                if let Some(a) = graph.iter().position(|&b| b == usize::MAX) {
                    return Err(f.malformed(format!("map {} {} misses `{}`", worlds[w], worlds[v], sets[w][a])));
                }
                maps.push((w, v, graph));
            }
            f.core(FinPresheaf::new(&frame, name, sets, maps))?
        };
        Ok(PresheafDecl {
            frame_name: frame_name.to_string(),
            frame,
            presheaf,
        })
    }

    fn coalgebra(&self, f: &Fields) -> Result<FCoalgebra, CliError> {
        let states = f.words("states")?;
        let mut step: Vec<Option<Vec<usize>>> = vec![None; states.len()];
        for (rest, e) in f.keyed("step") {
            let x = position(f, &states, name_of(f, rest, "step")?, "state")?;
            let next = f.words_of(e)?.into_iter().map(|s| position(f, &states, s, "state")).collect::<Result<Vec<_>, _>>()?;
            step[x] = Some(next);
        }
        let name = f.block.name.clone();
        match f.one("kind")? {
            "stream" => {
                let next = step
                    .iter()
                    .enumerate()
                    .map(|(x, s)| match s.as_deref() {
                        Some([y]) => Ok(*y),
                        _ => Err(f.malformed(format!("stream state `{}` needs exactly one successor", states[x]))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                f.core(FCoalgebra::stream(name, &states, &next))
            }
            "tree" => f.core(FCoalgebra::tree(name, &states, step.into_iter().map(Option::unwrap_or_default).collect())),
            other => Err(f.malformed(format!("coalgebra kind `{other}` is not stream or tree"))),
        }
    }

    /// `sets: N` for the bundled sets of size 1..N, or `set NAME: elements` entries; default N = 2.
    fn sets(&self, f: &Fields) -> Result<Vec<SetObject>, CliError> {
        let named = f.keyed("set");
        if let Some(n) = f.opt_one("sets")? {
            if !named.is_empty() {
                return Err(f.malformed("give either `sets` or `set` entries"));
            }
            return match n.parse::<usize>() {
                Ok(n @ 1..=3) => Ok(set_fragment(n)),
                _ => Err(f.malformed(format!("`sets: {n}` must be 1, 2 or 3"))),
            };
        }
        if named.is_empty() {
            return Ok(set_fragment(2));
        }
        named
            .into_iter()
            .map(|(rest, e)| Ok(SetObject::new(name_of(f, rest, "set")?, &f.words_of(e)?)))
            .collect()
    }

    fn refs<'m, T>(&'m self, f: &Fields, key: &str, pick: impl Fn(&'m Object) -> Option<T>, kind: &str) -> Result<Vec<T>, CliError> {
        f.words(key)?
            .into_iter()
            .map(|n| {
                let o = self.lookup(f, n)?;
                pick(o).ok_or_else(|| wrong_kind(f, n, o, kind))
            })
            .collect()
    }

    fn one_ref<'m, T>(&'m self, f: &Fields, key: &str, pick: impl Fn(&'m Object) -> Option<T>, kind: &str) -> Result<T, CliError> {
        let n = f.one(key)?;
        let o = self.lookup(f, n)?;
        pick(o).ok_or_else(|| wrong_kind(f, n, o, kind))
    }

    fn doctrine_ref(&self, f: &Fields) -> Result<Arc<Doctrine>, CliError> {
        self.one_ref(f, "doctrine", |o| match o {
            Object::Doctrine(d) => Some(d.clone()),
            _ => None,
        }, "doctrine")
    }

    fn presheaves(&self, f: &Fields) -> Result<(KripkeFrame, Vec<FinPresheaf>), CliError> {
        let decls = self.refs(f, "presheaves", |o| match o {
            Object::Presheaf(p) => Some(p),
            _ => None,
        }, "presheaf")?;
        let first = decls.first().ok_or_else(|| f.malformed("`presheaves` is empty"))?;
        if let Some(d) = decls.iter().find(|d| d.frame_name != first.frame_name) {
            return Err(f.malformed(format!("`{}` is over `{}`, not `{}`", d.presheaf.name, d.frame_name, first.frame_name)));
        }
        Ok((first.frame.clone(), decls.iter().map(|d| d.presheaf.clone()).collect()))
    }

    fn interior(&self, f: &Fields) -> Result<InteriorOp, CliError> {
        let op = match f.one("source")? {
            "identity" => InteriorOp::identity(self.doctrine_ref(f)?),
            "doctrine" => {
                let d = self.doctrine_ref(f)?;
                let c = d.base().clone();
                let mut boxes: Vec<Option<MonotoneMap>> = vec![None; c.num_objects()];
                for (rest, e) in f.keyed("box") {
                    let x = name_of(f, rest, "box")?;
                    let xi = c.object_index(x).ok_or_else(|| f.malformed(format!("`{x}` is not a base object")))?;
                    let pairs: Vec<(&str, &str)> = f.words_of(e)?.into_iter().map(|w| f.relation(w)).collect::<Result<_, _>>()?;
                    let fiber = d.fiber(xi).clone();
                    boxes[xi] = Some(f.core(MonotoneMap::from_names(fiber.clone(), fiber, &pairs))?);
                }
                let boxes = boxes
                    .into_iter()
                    .enumerate()
                    .map(|(x, b)| b.ok_or_else(|| f.malformed(format!("no box at `{}`", c.object_name(x)))))
                    .collect::<Result<Vec<_>, _>>()?;
                f.core(InteriorOp::new(d, boxes))?
            }
            "kripke" => {
                let frame = self.one_ref(f, "frame", |o| match o {
                    Object::Frame(k) => Some(k),
                    _ => None,
                }, "kripke-frame")?;
                f.core(kripke_doctrine(frame, self.sets(f)?))?.op
            }
            "fam" => {
                let frame = self.one_ref(f, "frame", |o| match o {
                    Object::Frame(k) => Some(k),
                    _ => None,
                }, "kripke-frame")?;
                let mut families = Vec::new();
                for (rest, e) in f.keyed("family") {
                    let name = name_of(f, rest, "family")?;
                    let parts = f.sets_of(e)?;
                    let mut carrier: Vec<&str> = Vec::new();
                    for s in parts.iter().flatten() {
                        if !carrier.contains(&s.as_str()) {
                            carrier.push(s);
                        }
                    }
                    let parts: Vec<Vec<&str>> = parts.iter().map(|p| p.iter().map(String::as_str).collect()).collect();
                    let refs: Vec<&[&str]> = parts.iter().map(Vec::as_slice).collect();
                    families.push(f.core(IndexedFamily::new(name, &carrier, &refs))?);
                }
                f.core(fam_doctrine(frame, families))?.op
            }
            "topology" => {
                let spaces = self.refs(f, "spaces", |o| match o {
                    Object::Space(s) => Some(s.clone()),
                    _ => None,
                }, "topspace")?;
                f.core(topological_doctrine(spaces))?.op
            }
            "bang" => {
                let q = self.one_ref(f, "quantale", |o| match o {
                    Object::Quantale(q) => Some(q),
                    _ => None,
                }, "quantale")?;
                f.core(quantale_doctrine(q, self.sets(f)?))?.bang
            }
            "presheaf" => {
                let (frame, presheaves) = self.presheaves(f)?;
                f.core(presheaf_instance(&frame, presheaves))?.op
            }
            "local-presheaf" => {
                let d = self.one_ref(f, "presheaf", |o| match o {
                    Object::Presheaf(p) => Some(p),
                    _ => None,
                }, "presheaf")?;
                f.core(local_presheaf_op(&d.frame, &d.presheaf))?
            }
            "temporal" => {
                let lift_name = f.one("lift")?;
                let lift = parse_lift(lift_name).ok_or_else(|| f.malformed(format!("lift `{lift_name}` is not G, AG or EG")))?;
                let coalgebras = self.refs(f, "coalgebras", |o| match o {
                    Object::Coalgebra(c) => Some(c.clone()),
                    _ => None,
                }, "coalgebra")?;
                f.core(temporal_doctrine(coalgebras, lift))?.op
            }
            "am" => f.core(am_modality(&*self.adjunction_ref(f)?))?.1,
            "cm" => {
                let bundle = f.core(em_doctrine(&self.comonad_ref(f)?))?;
                f.core(cm_modality(&bundle))?.1
            }
            other => return Err(f.malformed(format!("unknown interior source `{other}`"))),
        };
        Ok(op)
    }

    fn adjunction_ref(&self, f: &Fields) -> Result<Arc<DoctrineAdjunction>, CliError> {
        self.one_ref(f, "adjunction", |o| match o {
            Object::Adjunction(a) => Some(a.clone()),
            _ => None,
        }, "adjunction")
    }

    fn comonad_ref(&self, f: &Fields) -> Result<DoctrineComonad, CliError> {
        self.one_ref(f, "comonad", |o| match o {
            Object::Comonad(c) => Some(c.clone()),
            _ => None,
        }, "comonad")
    }

    fn interior_ref(&self, f: &Fields) -> Result<InteriorOp, CliError> {
        self.one_ref(f, "interior", |o| match o {
            Object::Interior(op) => Some(op.clone()),
            _ => None,
        }, "interior")
    }

    fn adjunction(&self, f: &Fields) -> Result<DoctrineAdjunction, CliError> {
        let adj = match f.one("source")? {
            "identity" => DoctrineAdjunction::identity(self.doctrine_ref(f)?),
            "quantale" => {
                let q = self.one_ref(f, "quantale", |o| match o {
                    Object::Quantale(q) => Some(q),
                    _ => None,
                }, "quantale")?;
                f.core(quantale_doctrine(q, self.sets(f)?))?.adjunction
            }
            "presheaf" => {
                let (frame, presheaves) = self.presheaves(f)?;
                f.core(presheaf_instance(&frame, presheaves))?.adjunction
            }
            "conjunction" => f.core(conjunction_modality(&self.doctrine_ref(f)?))?.adjunction,
            "forall" => {
                let factor = f.keyed("factor");
                let factor = match factor.as_slice() {
                    [(rest, e)] => SetObject::new(name_of(f, rest, "factor")?, &f.words_of(e)?),
                    _ => return Err(f.malformed("forall needs one `factor NAME: elements` entry")),
                };
                f.core(forall_modality(self.sets(f)?, factor))?.modality.adjunction
            }
            "ma" => f.core(ma(&self.interior_ref(f)?))?,
            "em" => {
                let bundle = f.core(em_doctrine(&self.comonad_ref(f)?))?;
                f.core(em_adjunction(&bundle))?
            }
            other => return Err(f.malformed(format!("unknown adjunction source `{other}`"))),
        };
        Ok(adj)
    }

    fn comonad(&self, f: &Fields) -> Result<DoctrineComonad, CliError> {
        match f.one("source")? {
            "identity" => Ok(DoctrineComonad::identity(self.doctrine_ref(f)?)),
            "cmd" => f.core(cmd_of_adjunction(&*self.adjunction_ref(f)?)),
            "mc" => f.core(mc(&self.interior_ref(f)?)),
            other => Err(f.malformed(format!("unknown comonad source `{other}`"))),
        }
    }

    fn query(&self, f: &Fields) -> Result<Query, CliError> {
        let op = f.one("op")?;
        let lift = parse_lift(op).ok_or_else(|| f.malformed(format!("op `{op}` is not G, AG or EG")))?;
        let coalgebra = self.one_ref(f, "coalgebra", |o| match o {
            Object::Coalgebra(c) => Some(c.clone()),
            _ => None,
        }, "coalgebra")?;
        let subset = |key: &str| -> Result<Option<u64>, CliError> {
            match f.opt_sets(key)?.as_deref() {
                None => Ok(None),
                Some([s]) => f.core(coalgebra.parse_subset(&format!("{{{}}}", s.join(",")))).map(Some),
                Some(_) => Err(f.malformed(format!("`{key}` takes one set"))),
            }
        };
        let alpha = subset("alpha")?.ok_or_else(|| f.malformed("missing `alpha`"))?;
        let expect = subset("expect")?;
        Ok(Query {
            coalgebra,
            lift,
            alpha,
            expect,
        })
    }
}

fn name_of<'a>(f: &Fields, rest: &'a [String], what: &str) -> Result<&'a str, CliError> {
    match rest {
        [one] => Ok(one),
        _ => Err(f.malformed(format!("`{what}` takes one name before `:`"))),
    }
}

fn wrong_kind(f: &Fields, name: &str, found: &Object, expected: &str) -> CliError {
    f.malformed(format!("`{name}` is a {}, expected a {expected}", found.kind()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<Model, CliError> {
        Model::load(&Document::parse(text)?, DEFAULT_MAX_SIZE)
    }

    #[test]
    fn frame_closure() {
        let m = load("kripke-frame K { worlds: w1 w2; rel: w1->w2; closure: refl-trans }").unwrap();
        let Object::Frame(k) = &m.get("K").unwrap().object else { panic!() };
        assert_eq!(k.pairs(), vec![(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn dangling_query_reference() {
        match load("query q { op: EG; coalgebra: M; alpha: {s0} }") {
            Err(CliError::Unresolved { name, block, .. }) => assert_eq!((name.as_str(), block.as_str()), ("M", "q")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_keys_and_kinds() {
        assert!(matches!(load("poset P { elements: a; colour: red }"), Err(CliError::Malformed { .. })));
        assert!(matches!(load("widget W { }"), Err(CliError::Malformed { .. })));
        assert!(matches!(load("poset P { elements: a b; leq: a->b b->a }"), Err(CliError::Malformed { .. })));
    }

    #[test]
    fn wrong_kind_reference() {
        let text = "poset P { elements: a }\ninterior I { source: kripke; frame: P }";
        match load(text) {
            Err(CliError::Malformed { message, .. }) => assert!(message.contains("is a poset")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn explicit_doctrine_and_box() {
        let text = "\
poset two { elements: 0 1; leq: 0->1 }
category C { objects: x y; arrow f: x->y }
doctrine D { base: C; fiber x: two; fiber y: two; reindex f: 0->0 1->1 }
interior I { source: doctrine; doctrine: D; box x: 0->0 1->1; box y: 0->0 1->0 }";
        let m = load(text).unwrap();
        let Object::Interior(op) = &m.get("I").unwrap().object else { panic!() };
        // the box at y is not natural along f
        assert!(op.check().iter().any(|v| v.law.contains("natural")));
    }

    #[test]
    fn max_size_refuses() {
        let text = "quantale L { preset: lukasiewicz3 }\ninterior B { source: bang; quantale: L; sets: 3 }";
        let doc = Document::parse(text).unwrap();
        assert!(Model::load(&doc, DEFAULT_MAX_SIZE).is_ok());
        assert!(matches!(Model::load(&doc, 10), Err(CliError::Refused { .. })));
    }

    #[test]
    fn tree_coalgebra_query() {
        let text = "\
coalgebra M { kind: tree; states: s0 s1 s2; step s0: s1 s2; step s1: s1; step s2: }
query q { op: EG; coalgebra: M; alpha: {s0,s1}; expect: {s0,s1} }";
        let m = load(text).unwrap();
        let Object::Query(q) = &m.get("q").unwrap().object else { panic!() };
        assert_eq!((q.alpha, q.expect), (0b011, Some(0b011)));
    }
}
