//! Finite presheaves as multi-sorted unary algebras, their homomorphisms,
//! and action-closed subsets.
//!
//! A presheaf over a finite category has one finite carrier per object and
//! one total map per arrow, subject to the functor laws.  Element names are
//! unique within their sort; the same name may appear in different sorts,
//! so cross-sort reports use the qualified form `Sort:name`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{ArrowId, FinCat, ObjId};

/// An element of a presheaf: its sort plus its index in that sort's carrier.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Elem {
    pub sort: ObjId,
    pub idx: usize,
}

/// Wire format for a presheaf.  `category` is a path to the category file;
/// identity actions are implicit and must not appear.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawPresheaf {
    pub category: String,
    pub carriers: BTreeMap<String, Vec<String>>,
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}

/// Wire format for a homomorphism between two presheaf files.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawHom {
    pub source: String,
    pub target: String,
    pub map: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    cat: Arc<FinCat>,
    carriers: Vec<Vec<String>>,
    elem_index: Vec<HashMap<String, usize>>,
    /// `actions[a][i]` is the index in carrier(cod(a)) of the image of the
    /// i-th element of carrier(dom(a)).  Identity actions are stored too.
    actions: Vec<Vec<usize>>,
}

/// Checks carriers and actions against the functor laws.  Carriers are
/// sorted, missing carrier entries mean empty sorts, and identity actions
/// are synthesized.
pub fn validate_presheaf(cat: &Arc<FinCat>, raw: &RawPresheaf) -> Result<Presheaf> {
    let mut carriers: Vec<Vec<String>> = vec![Vec::new(); cat.n_objects()];
    for (obj, elems) in &raw.carriers {
        let o = cat.object_id(obj)?;
        let mut sorted = elems.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateName(format!("element {obj}:{}", w[0])));
            }
        }
        carriers[o.0] = sorted;
    }
    let elem_index: Vec<HashMap<String, usize>> = carriers
        .iter()
        .map(|c| c.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect())
        .collect();

    let mut actions: Vec<Vec<usize>> = vec![Vec::new(); cat.n_arrows()];
    for a in cat.arrows() {
        if cat.is_identity(a) {
            actions[a.0] = (0..carriers[cat.dom(a).0].len()).collect();
        }
    }
    for (name, table) in &raw.actions {
        let a = cat
            .arrow_id(name)
            .map_err(|_| Error::BadTyping(format!("action given for unknown arrow {name}")))?;
        if cat.is_identity(a) {
            return Err(Error::BadTyping(format!(
                "action given for identity arrow {name}; identity actions are implicit"
            )));
        }
        let dom = cat.dom(a).0;
        let cod = cat.cod(a).0;
        let mut map = vec![usize::MAX; carriers[dom].len()];
        for (x, y) in table {
            let xi = *elem_index[dom].get(x).ok_or_else(|| {
                Error::BadTyping(format!(
                    "action of {name} mentions {x}, not an element of sort {}",
                    cat.object_name(cat.dom(a))
                ))
            })?;
            let yi = *elem_index[cod].get(y).ok_or_else(|| {
                Error::BadTyping(format!(
                    "action of {name} sends {x} to {y}, not an element of sort {}",
                    cat.object_name(cat.cod(a))
                ))
            })?;
            map[xi] = yi;
        }
        if let Some(xi) = map.iter().position(|&v| v == usize::MAX) {
            return Err(Error::EmptyActionEntry {
                arrow: name.clone(),
                elem: carriers[dom][xi].clone(),
            });
        }
        actions[a.0] = map;
    }
    for a in cat.arrows() {
        if !cat.is_identity(a) && !carriers[cat.dom(a).0].is_empty() && actions[a.0].is_empty() {
            return Err(Error::EmptyActionEntry {
                arrow: cat.arrow_name(a).to_string(),
                elem: carriers[cat.dom(a).0][0].clone(),
            });
        }
    }

    // Composition law: gf . x == g . (f . x) on every composable pair.
    for g in cat.arrows() {
        for f in cat.arrows() {
            if cat.is_identity(g) || cat.is_identity(f) {
                continue;
            }
            let Some(gf) = cat.compose(g, f) else { continue };
            for (xi, &fx) in actions[f.0].iter().enumerate() {
                if actions[gf.0][xi] != actions[g.0][fx] {
                    return Err(Error::CompositionViolation {
                        g: cat.arrow_name(g).to_string(),
                        f: cat.arrow_name(f).to_string(),
                        gf: cat.arrow_name(gf).to_string(),
                        elem: carriers[cat.dom(f).0][xi].clone(),
                    });
                }
            }
        }
    }

    Ok(Presheaf { cat: cat.clone(), carriers, elem_index, actions })
}

impl Presheaf {
    /// Convenience constructor for tests and fixtures.
    pub fn build(
        cat: &Arc<FinCat>,
        carriers: &[(&str, &[&str])],
        actions: &[(&str, &[(&str, &str)])],
    ) -> Result<Presheaf> {
        let raw = RawPresheaf {
            category: String::new(),
            carriers: carriers
                .iter()
                .map(|(o, es)| (o.to_string(), es.iter().map(|e| e.to_string()).collect()))
                .collect(),
            actions: actions
                .iter()
                .map(|(a, m)| {
                    (a.to_string(), m.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect())
                })
                .collect(),
        };
        validate_presheaf(cat, &raw)
    }

    pub fn empty(cat: &Arc<FinCat>) -> Presheaf {
        Presheaf {
            cat: cat.clone(),
            carriers: vec![Vec::new(); cat.n_objects()],
            elem_index: vec![HashMap::new(); cat.n_objects()],
            actions: vec![Vec::new(); cat.n_arrows()],
        }
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }
    pub fn carrier(&self, o: ObjId) -> &[String] {
        &self.carriers[o.0]
    }
    /// Total element count across all sorts.
    pub fn size(&self) -> usize {
        self.carriers.iter().map(|c| c.len()).sum()
    }
    pub fn elem_name(&self, e: Elem) -> &str {
        &self.carriers[e.sort.0][e.idx]
    }
    pub fn qualified(&self, e: Elem) -> String {
        format!("{}:{}", self.cat.object_name(e.sort), self.elem_name(e))
    }
    pub fn elem(&self, sort: ObjId, name: &str) -> Result<Elem> {
        self.elem_index[sort.0].get(name).map(|&idx| Elem { sort, idx }).ok_or_else(|| {
            Error::ElementNotInAmbient(format!("{}:{name}", self.cat.object_name(sort)))
        })
    }
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.carriers
            .iter()
            .enumerate()
            .flat_map(|(s, c)| (0..c.len()).map(move |idx| Elem { sort: ObjId(s), idx }))
    }
    pub fn elements_of(&self, o: ObjId) -> impl Iterator<Item = Elem> + '_ {
        (0..self.carriers[o.0].len()).map(move |idx| Elem { sort: o, idx })
    }

    /// Applies the action of `a`; `e` must have sort dom(a).
    pub fn act(&self, a: ArrowId, e: Elem) -> Elem {
        debug_assert_eq!(e.sort, self.cat.dom(a));
        Elem { sort: self.cat.cod(a), idx: self.actions[a.0][e.idx] }
    }

    pub fn to_raw(&self, category_path: &str) -> RawPresheaf {
        let mut carriers = BTreeMap::new();
        for o in self.cat.objects() {
            if !self.carriers[o.0].is_empty() {
                carriers.insert(self.cat.object_name(o).to_string(), self.carriers[o.0].clone());
            }
        }
        let mut actions = BTreeMap::new();
        for a in self.cat.arrows() {
            if self.cat.is_identity(a) || self.carriers[self.cat.dom(a).0].is_empty() {
                continue;
            }
            let table: BTreeMap<String, String> = self
                .elements_of(self.cat.dom(a))
                .map(|e| {
                    (self.elem_name(e).to_string(), self.elem_name(self.act(a, e)).to_string())
                })
                .collect();
            actions.insert(self.cat.arrow_name(a).to_string(), table);
        }
        RawPresheaf { category: category_path.to_string(), carriers, actions }
    }
}

/// The representable presheaf at `x`: sort Y carries the arrows x -> Y and
/// arrows act by postcomposition.
pub fn representable(cat: &Arc<FinCat>, x: ObjId) -> Presheaf {
    let mut carriers: Vec<Vec<&str>> = vec![Vec::new(); cat.n_objects()];
    for a in cat.arrows() {
        if cat.dom(a) == x {
            carriers[cat.cod(a).0].push(cat.arrow_name(a));
        }
    }
    let carrier_pairs: Vec<(&str, &[&str])> =
        cat.objects().map(|o| (cat.object_name(o), carriers[o.0].as_slice())).collect();
    let mut actions: Vec<(&str, Vec<(&str, &str)>)> = Vec::new();
    for f in cat.arrows() {
        if cat.is_identity(f) {
            continue;
        }
        let mut table = Vec::new();
        for &h_name in &carriers[cat.dom(f).0] {
            let h = cat.arrow_id(h_name).unwrap();
            let fh = cat.compose(f, h).unwrap();
            table.push((h_name, cat.arrow_name(fh)));
        }
        actions.push((cat.arrow_name(f), table));
    }
    let action_pairs: Vec<(&str, &[(&str, &str)])> =
        actions.iter().map(|(f, t)| (*f, t.as_slice())).collect();
    Presheaf::build(cat, &carrier_pairs, &action_pairs)
        .expect("representable presheaves always satisfy the functor laws")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubPresheaf {
    ambient: Arc<Presheaf>,
    members: Vec<BTreeSet<usize>>,
}

impl SubPresheaf {
    pub fn empty(ambient: &Arc<Presheaf>) -> SubPresheaf {
        SubPresheaf {
            ambient: ambient.clone(),
            members: vec![BTreeSet::new(); ambient.cat.n_objects()],
        }
    }

    pub fn whole(ambient: &Arc<Presheaf>) -> SubPresheaf {
        SubPresheaf {
            ambient: ambient.clone(),
            members: ambient.carriers.iter().map(|c| (0..c.len()).collect()).collect(),
        }
    }

    /// Wraps an explicit member table, rejecting sets not closed under the
    /// actions.
    pub fn from_members(
        ambient: &Arc<Presheaf>,
        members: Vec<BTreeSet<usize>>,
    ) -> Result<SubPresheaf> {
        let sub = SubPresheaf { ambient: ambient.clone(), members };
        for e in sub.elements() {
            for f in ambient.cat.arrows_from(e.sort) {
                let fe = ambient.act(f, e);
                if !sub.contains(fe) {
                    return Err(Error::BaseNotClosed {
                        arrow: ambient.cat.arrow_name(f).to_string(),
                        elem: ambient.qualified(e),
                    });
                }
            }
        }
        Ok(sub)
    }

    pub fn from_named(
        ambient: &Arc<Presheaf>,
        named: &BTreeMap<String, Vec<String>>,
    ) -> Result<SubPresheaf> {
        let mut members = vec![BTreeSet::new(); ambient.cat.n_objects()];
        for (obj, elems) in named {
            let o = ambient.cat.object_id(obj)?;
            for name in elems {
                members[o.0].insert(ambient.elem(o, name)?.idx);
            }
        }
        SubPresheaf::from_members(ambient, members)
    }

    pub fn ambient(&self) -> &Arc<Presheaf> {
        &self.ambient
    }
    pub fn contains(&self, e: Elem) -> bool {
        self.members[e.sort.0].contains(&e.idx)
    }
    pub fn size(&self) -> usize {
        self.members.iter().map(|m| m.len()).sum()
    }
    pub fn is_empty(&self) -> bool {
        self.members.iter().all(|m| m.is_empty())
    }
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members
            .iter()
            .enumerate()
            .flat_map(|(s, m)| m.iter().map(move |&idx| Elem { sort: ObjId(s), idx }))
    }
    /// Elements of the ambient presheaf outside this subpresheaf.
    pub fn complement(&self) -> impl Iterator<Item = Elem> + '_ {
        self.ambient.elements().filter(move |&e| !self.contains(e))
    }
    pub fn is_subset_of(&self, other: &SubPresheaf) -> bool {
        self.elements().all(|e| other.contains(e))
    }

    pub fn union(&self, other: &SubPresheaf) -> Result<SubPresheaf> {
        if self.ambient != other.ambient {
            return Err(Error::DifferentAmbient);
        }
        let members = self
            .members
            .iter()
            .zip(&other.members)
            .map(|(a, b)| a.union(b).copied().collect())
            .collect();
        // A union of action-closed sets is action-closed.
        Ok(SubPresheaf { ambient: self.ambient.clone(), members })
    }

    /// A standalone presheaf on the member elements, keeping their names.
    pub fn to_presheaf(&self) -> Presheaf {
        let cat = self.ambient.cat.clone();
        let carriers: Vec<(String, Vec<String>)> = cat
            .objects()
            .map(|o| {
                (
                    cat.object_name(o).to_string(),
                    self.members[o.0]
                        .iter()
                        .map(|&i| self.ambient.carriers[o.0][i].clone())
                        .collect(),
                )
            })
            .collect();
        let mut actions: Vec<(String, Vec<(String, String)>)> = Vec::new();
        for f in cat.arrows() {
            if cat.is_identity(f) {
                continue;
            }
            let table: Vec<(String, String)> = self.members[cat.dom(f).0]
                .iter()
                .map(|&i| {
                    let e = Elem { sort: cat.dom(f), idx: i };
                    let fe = self.ambient.act(f, e);
                    (self.ambient.elem_name(e).to_string(), self.ambient.elem_name(fe).to_string())
                })
                .collect();
            actions.push((cat.arrow_name(f).to_string(), table));
        }
        let carrier_refs: Vec<(&str, Vec<&str>)> = carriers
            .iter()
            .map(|(o, es)| (o.as_str(), es.iter().map(|e| e.as_str()).collect()))
            .collect();
        let carrier_slices: Vec<(&str, &[&str])> =
            carrier_refs.iter().map(|(o, es)| (*o, es.as_slice())).collect();
        let action_refs: Vec<(&str, Vec<(&str, &str)>)> = actions
            .iter()
            .map(|(f, t)| (f.as_str(), t.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect()))
            .collect();
        let action_slices: Vec<(&str, &[(&str, &str)])> =
            action_refs.iter().map(|(f, t)| (*f, t.as_slice())).collect();
        Presheaf::build(&cat, &carrier_slices, &action_slices)
            .expect("action-closed subsets satisfy the functor laws")
    }

    /// The inclusion of `to_presheaf()` into the ambient presheaf.
    pub fn inclusion_hom(&self) -> Hom {
        let source = Arc::new(self.to_presheaf());
        let map = source
            .cat
            .objects()
            .map(|o| {
                source.carriers[o.0].iter().map(|name| self.ambient.elem_index[o.0][name]).collect()
            })
            .collect();
        Hom { source, target: self.ambient.clone(), map }
    }
}

/// The smallest action-closed subset of `ambient` containing `seeds`.
/// Computed by a single application pass: composites of arrows are arrows,
/// so {f . a} is already closed.
pub fn generate(ambient: &Arc<Presheaf>, seeds: &[Elem]) -> SubPresheaf {
    let mut members = vec![BTreeSet::new(); ambient.cat.n_objects()];
    for &e in seeds {
        debug_assert!(e.idx < ambient.carriers[e.sort.0].len());
        for f in ambient.cat.arrows_from(e.sort) {
            let fe = ambient.act(f, e);
            members[fe.sort.0].insert(fe.idx);
        }
    }
    SubPresheaf { ambient: ambient.clone(), members }
}

/// Name-based entry point for [`generate`].
pub fn generate_named(
    ambient: &Arc<Presheaf>,
    named: &BTreeMap<String, Vec<String>>,
) -> Result<SubPresheaf> {
    let mut seeds = Vec::new();
    for (obj, elems) in named {
        let o = ambient.cat.object_id(obj)?;
        for name in elems {
            seeds.push(ambient.elem(o, name)?);
        }
    }
    Ok(generate(ambient, &seeds))
}

/// Sortwise intersection of two subpresheaves of the same ambient.
pub fn intersect(a: &SubPresheaf, b: &SubPresheaf) -> Result<SubPresheaf> {
    if a.ambient != b.ambient {
        return Err(Error::DifferentAmbient);
    }
    let members = a
        .members
        .iter()
        .zip(&b.members)
        .map(|(x, y)| x.intersection(y).copied().collect())
        .collect();
    Ok(SubPresheaf { ambient: a.ambient.clone(), members })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    source: Arc<Presheaf>,
    target: Arc<Presheaf>,
    /// `map[sort][i]` is the target index of the i-th source element.
    map: Vec<Vec<usize>>,
}

/// Checks a raw sortwise map for totality and naturality.
pub fn validate_hom(
    raw_map: &BTreeMap<String, BTreeMap<String, String>>,
    source: &Arc<Presheaf>,
    target: &Arc<Presheaf>,
) -> Result<Hom> {
    if source.cat != target.cat {
        return Err(Error::BadTyping("source and target live over different categories".into()));
    }
    let cat = &source.cat;
    let mut map: Vec<Vec<usize>> =
        source.carriers.iter().map(|c| vec![usize::MAX; c.len()]).collect();
    for (obj, table) in raw_map {
        let o = cat.object_id(obj)?;
        for (x, y) in table {
            let xe = source.elem(o, x).map_err(|_| {
                Error::BadTyping(format!("map mentions {obj}:{x}, not a source element"))
            })?;
            let ye = target.elem(o, y).map_err(|_| {
                Error::BadTyping(format!("map sends {obj}:{x} to {obj}:{y}, not a target element"))
            })?;
            map[o.0][xe.idx] = ye.idx;
        }
    }
    for o in cat.objects() {
        if let Some(i) = map[o.0].iter().position(|&v| v == usize::MAX) {
            return Err(Error::BadTyping(format!(
                "map has no entry for {}:{}",
                cat.object_name(o),
                source.carriers[o.0][i]
            )));
        }
    }
    let h = Hom { source: source.clone(), target: target.clone(), map };
    h.check_naturality()?;
    Ok(h)
}

impl Hom {
    /// The hom matching elements of the source to target elements of the
    /// same sort and name; fails if a name is missing or naturality breaks.
    pub fn inclusion_by_name(source: &Arc<Presheaf>, target: &Arc<Presheaf>) -> Result<Hom> {
        if source.cat != target.cat {
            return Err(Error::BadTyping(
                "source and target live over different categories".into(),
            ));
        }
        let mut map: Vec<Vec<usize>> = Vec::with_capacity(source.carriers.len());
        for o in source.cat.objects() {
            let mut row = Vec::with_capacity(source.carriers[o.0].len());
            for e in source.elements_of(o) {
                row.push(target.elem(o, source.elem_name(e))?.idx);
            }
            map.push(row);
        }
        let h = Hom { source: source.clone(), target: target.clone(), map };
        h.check_naturality()?;
        Ok(h)
    }

    pub fn identity(p: &Arc<Presheaf>) -> Hom {
        Hom {
            source: p.clone(),
            target: p.clone(),
            map: p.carriers.iter().map(|c| (0..c.len()).collect()).collect(),
        }
    }

    /// Builds a hom from an element-level assignment, validating naturality.
    pub fn from_fn(
        source: &Arc<Presheaf>,
        target: &Arc<Presheaf>,
        f: impl Fn(Elem) -> Elem,
    ) -> Result<Hom> {
        if source.cat != target.cat {
            return Err(Error::BadTyping(
                "source and target live over different categories".into(),
            ));
        }
        let mut map: Vec<Vec<usize>> = Vec::with_capacity(source.carriers.len());
        for o in source.cat.objects() {
            let mut row = Vec::with_capacity(source.carriers[o.0].len());
            for e in source.elements_of(o) {
                let img = f(e);
                if img.sort != o || img.idx >= target.carriers[o.0].len() {
                    return Err(Error::BadTyping(format!(
                        "image of {} is not a target element of the same sort",
                        source.qualified(e)
                    )));
                }
                row.push(img.idx);
            }
            map.push(row);
        }
        let h = Hom { source: source.clone(), target: target.clone(), map };
        h.check_naturality()?;
        Ok(h)
    }

    fn check_naturality(&self) -> Result<()> {
        let cat = &self.source.cat;
        for f in cat.arrows() {
            if cat.is_identity(f) {
                continue;
            }
            for x in self.source.elements_of(cat.dom(f)) {
                let lhs = self.apply(self.source.act(f, x));
                let rhs = self.target.act(f, self.apply(x));
                if lhs != rhs {
                    return Err(Error::NaturalityViolation {
                        arrow: cat.arrow_name(f).to_string(),
                        elem: self.source.qualified(x),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<Presheaf> {
        &self.source
    }
    pub fn target(&self) -> &Arc<Presheaf> {
        &self.target
    }
    pub fn apply(&self, e: Elem) -> Elem {
        Elem { sort: e.sort, idx: self.map[e.sort.0][e.idx] }
    }

    /// Injective on every sort.
    pub fn is_mono(&self) -> bool {
        self.map.iter().all(|row| {
            let mut seen = BTreeSet::new();
            row.iter().all(|&v| seen.insert(v))
        })
    }

    /// Composition `self` after `first`.
    pub fn compose(&self, first: &Hom) -> Result<Hom> {
        if first.target != self.source {
            return Err(Error::SourceMismatch(
                "composition requires matching middle presheaf".into(),
            ));
        }
        Ok(Hom {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first
                .map
                .iter()
                .enumerate()
                .map(|(s, row)| row.iter().map(|&v| self.map[s][v]).collect())
                .collect(),
        })
    }

    /// The image as a subpresheaf of the target.
    pub fn image(&self) -> SubPresheaf {
        let mut members = vec![BTreeSet::new(); self.target.cat.n_objects()];
        for e in self.source.elements() {
            let img = self.apply(e);
            members[img.sort.0].insert(img.idx);
        }
        SubPresheaf { ambient: self.target.clone(), members }
    }

    /// Direct image of a subpresheaf of the source.
    pub fn image_of(&self, s: &SubPresheaf) -> Result<SubPresheaf> {
        if s.ambient != self.source {
            return Err(Error::DifferentAmbient);
        }
        let mut members = vec![BTreeSet::new(); self.target.cat.n_objects()];
        for e in s.elements() {
            let img = self.apply(e);
            members[img.sort.0].insert(img.idx);
        }
        Ok(SubPresheaf { ambient: self.target.clone(), members })
    }

    pub fn to_raw(&self, source_path: &str, target_path: &str) -> RawHom {
        let cat = &self.source.cat;
        let mut map = BTreeMap::new();
        for o in cat.objects() {
            if self.source.carriers[o.0].is_empty() {
                continue;
            }
            let table: BTreeMap<String, String> = self
                .source
                .elements_of(o)
                .map(|e| {
                    (
                        self.source.elem_name(e).to_string(),
                        self.target.elem_name(self.apply(e)).to_string(),
                    )
                })
                .collect();
            map.insert(cat.object_name(o).to_string(), table);
        }
        RawHom { source: source_path.to_string(), target: target_path.to_string(), map }
    }
}

/// All action-closed subsets of `ambient`, by filtering the powerset of
/// its elements.  Exponential; intended for desk-scale cross-checks.
pub fn enumerate_subpresheaves(ambient: &Arc<Presheaf>) -> Vec<SubPresheaf> {
    let elems: Vec<Elem> = ambient.elements().collect();
    assert!(elems.len() <= 20, "powerset enumeration is desk-scale only");
    let mut out = Vec::new();
    'mask: for mask in 0u32..(1u32 << elems.len()) {
        let mut members = vec![BTreeSet::new(); ambient.cat.n_objects()];
        for (i, &e) in elems.iter().enumerate() {
            if mask & (1 << i) != 0 {
                members[e.sort.0].insert(e.idx);
            }
        }
        let sub = SubPresheaf { ambient: ambient.clone(), members };
        for e in sub.elements() {
            for f in ambient.cat.arrows_from(e.sort) {
                if !sub.contains(ambient.act(f, e)) {
                    continue 'mask;
                }
            }
        }
        out.push(sub);
    }
    out
}

/// All homomorphisms source -> target, by backtracking over elements in
/// canonical order with naturality checked as soon as both sides are
/// assigned.  Exponential; intended for desk-scale cross-checks.
pub fn enumerate_homs(source: &Arc<Presheaf>, target: &Arc<Presheaf>) -> Vec<Hom> {
    let elems: Vec<Elem> = source.elements().collect();
    let mut assignment: HashMap<Elem, Elem> = HashMap::new();
    let mut out = Vec::new();
    fn consistent(
        source: &Presheaf,
        target: &Presheaf,
        assignment: &HashMap<Elem, Elem>,
        just_set: Elem,
    ) -> bool {
        let cat = source.cat();
        for f in cat.arrows_from(just_set.sort) {
            let fx = source.act(f, just_set);
            if let Some(&img_fx) = assignment.get(&fx) {
                if target.act(f, assignment[&just_set]) != img_fx {
                    return false;
                }
            }
        }
        // just_set may itself be the image f . x of earlier elements.
        for x in source.elements() {
            if let Some(&img_x) = assignment.get(&x) {
                for f in cat.arrows_from(x.sort) {
                    if source.act(f, x) == just_set && target.act(f, img_x) != assignment[&just_set]
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn rec(
        source: &Arc<Presheaf>,
        target: &Arc<Presheaf>,
        elems: &[Elem],
        pos: usize,
        assignment: &mut HashMap<Elem, Elem>,
        out: &mut Vec<Hom>,
    ) {
        if pos == elems.len() {
            let h = Hom::from_fn(source, target, |e| assignment[&e])
                .expect("incremental checks guarantee naturality");
            out.push(h);
            return;
        }
        let x = elems[pos];
        for y in target.elements_of(x.sort) {
            assignment.insert(x, y);
            if consistent(source, target, assignment, x) {
                rec(source, target, elems, pos + 1, assignment, out);
            }
            assignment.remove(&x);
        }
    }
    rec(source, target, &elems, 0, &mut assignment, &mut out);
    out
}
