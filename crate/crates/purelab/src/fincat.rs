//! Finite categories as validated composition tables.
//!
//! A category is stored with objects in lexicographic order and arrows in a
//! canonical order: one identity per object first (following object order),
//! then the remaining arrows sorted by name.  All search procedures iterate
//! in this order, so reported witnesses are deterministic.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ObjId(pub usize);

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ArrowId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// Wire format for a category.  Identity arrows and identity composites are
/// implicit and must not appear in the file.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub arrows: Vec<RawArrow>,
    pub compose: Vec<RawComposite>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawArrow {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// One composition table entry: `gf` is the composite "first f, then g".
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawComposite {
    pub g: String,
    pub f: String,
    pub gf: String,
}

#[derive(Clone, Debug)]
pub struct FinCat {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identity: Vec<ArrowId>,
    /// Total composition table, indexed `comp[g * n_arrows + f]`.
    /// `None` exactly when cod(f) != dom(g).
    comp: Vec<Option<ArrowId>>,
    obj_index: HashMap<String, ObjId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.arrows == other.arrows && self.comp == other.comp
    }
}
impl Eq for FinCat {}

fn identity_name(obj: &str) -> String {
    format!("id_{obj}")
}

/// Checks a raw description against the category axioms and builds the
/// canonical in-memory form.  Rejects unknown references, missing or
/// ill-typed composites, and associativity failures.
pub fn validate_category(raw: &RawCategory) -> Result<FinCat> {
    let mut objects = raw.objects.clone();
    objects.sort();
    for w in objects.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateName(format!("object {}", w[0])));
        }
    }
    let obj_index: HashMap<String, ObjId> =
        objects.iter().enumerate().map(|(i, o)| (o.clone(), ObjId(i))).collect();

    let id_names: HashSet<String> = objects.iter().map(|o| identity_name(o)).collect();
    let mut non_ids = Vec::with_capacity(raw.arrows.len());
    let mut seen = HashSet::new();
    for a in &raw.arrows {
        if id_names.contains(&a.name) {
            return Err(Error::DuplicateName(format!(
                "arrow {} collides with an implicit identity",
                a.name
            )));
        }
        if !seen.insert(a.name.clone()) {
            return Err(Error::DuplicateName(format!("arrow {}", a.name)));
        }
        let dom = *obj_index.get(&a.dom).ok_or_else(|| Error::UnknownObject(a.dom.clone()))?;
        let cod = *obj_index.get(&a.cod).ok_or_else(|| Error::UnknownObject(a.cod.clone()))?;
        non_ids.push(Arrow { name: a.name.clone(), dom, cod });
    }
    non_ids.sort_by(|x, y| x.name.cmp(&y.name));

    let mut arrows = Vec::with_capacity(objects.len() + non_ids.len());
    let mut identity = Vec::with_capacity(objects.len());
    for (i, o) in objects.iter().enumerate() {
        identity.push(ArrowId(arrows.len()));
        arrows.push(Arrow { name: identity_name(o), dom: ObjId(i), cod: ObjId(i) });
    }
    arrows.extend(non_ids);
    let arrow_index: HashMap<String, ArrowId> =
        arrows.iter().enumerate().map(|(i, a)| (a.name.clone(), ArrowId(i))).collect();

    let n = arrows.len();
    let mut comp: Vec<Option<ArrowId>> = vec![None; n * n];
    // Identity laws fill every pair involving an identity.
    for (i, a) in arrows.iter().enumerate() {
        comp[identity[a.cod.0].0 * n + i] = Some(ArrowId(i));
        comp[i * n + identity[a.dom.0].0] = Some(ArrowId(i));
    }

    let is_id = |id: ArrowId| id.0 < objects.len();
    for e in &raw.compose {
        let g = *arrow_index
            .get(&e.g)
            .ok_or_else(|| Error::BadTyping(format!("unknown arrow {} in compose table", e.g)))?;
        let f = *arrow_index
            .get(&e.f)
            .ok_or_else(|| Error::BadTyping(format!("unknown arrow {} in compose table", e.f)))?;
        let gf = *arrow_index
            .get(&e.gf)
            .ok_or_else(|| Error::BadTyping(format!("unknown arrow {} in compose table", e.gf)))?;
        if is_id(g) || is_id(f) {
            return Err(Error::BadTyping(format!(
                "compose entry ({}, {}) involves an identity; identity composites are implicit",
                e.g, e.f
            )));
        }
        if arrows[f.0].cod != arrows[g.0].dom {
            return Err(Error::BadTyping(format!(
                "compose entry ({}, {}): cod({}) != dom({})",
                e.g, e.f, e.f, e.g
            )));
        }
        if arrows[gf.0].dom != arrows[f.0].dom || arrows[gf.0].cod != arrows[g.0].cod {
            return Err(Error::BadTyping(format!(
                "compose entry ({}, {}) = {}: composite has wrong endpoints",
                e.g, e.f, e.gf
            )));
        }
        if comp[g.0 * n + f.0].is_some() {
            return Err(Error::DuplicateName(format!("compose entry ({}, {})", e.g, e.f)));
        }
        comp[g.0 * n + f.0] = Some(gf);
    }

    // Totality over composable pairs.
    for g in 0..n {
        for f in 0..n {
            if arrows[f].cod == arrows[g].dom && comp[g * n + f].is_none() {
                return Err(Error::MissingComposite {
                    g: arrows[g].name.clone(),
                    f: arrows[f].name.clone(),
                });
            }
        }
    }

    // Associativity: h.(g.f) == (h.g).f on all composable triples.
    for h in 0..n {
        for g in 0..n {
            if arrows[g].cod != arrows[h].dom {
                continue;
            }
            let hg = comp[h * n + g].unwrap();
            for f in 0..n {
                if arrows[f].cod != arrows[g].dom {
                    continue;
                }
                let gf = comp[g * n + f].unwrap();
                let left = comp[hg.0 * n + f].unwrap();
                let right = comp[h * n + gf.0].unwrap();
                if left != right {
                    return Err(Error::NonAssociative {
                        h: arrows[h].name.clone(),
                        g: arrows[g].name.clone(),
                        f: arrows[f].name.clone(),
                        left: arrows[left.0].name.clone(),
                        right: arrows[right.0].name.clone(),
                    });
                }
            }
        }
    }

    Ok(FinCat { objects, arrows, identity, comp, obj_index, arrow_index })
}

impl FinCat {
    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }
    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }
    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len()).map(ObjId)
    }
    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).map(ArrowId)
    }
    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o.0]
    }
    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }
    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a.0].name
    }
    pub fn dom(&self, a: ArrowId) -> ObjId {
        self.arrows[a.0].dom
    }
    pub fn cod(&self, a: ArrowId) -> ObjId {
        self.arrows[a.0].cod
    }
    pub fn object_id(&self, name: &str) -> Result<ObjId> {
        self.obj_index.get(name).copied().ok_or_else(|| Error::UnknownObject(name.to_string()))
    }
    pub fn arrow_id(&self, name: &str) -> Result<ArrowId> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::BadTyping(format!("unknown arrow {name}")))
    }
    pub fn identity(&self, o: ObjId) -> ArrowId {
        self.identity[o.0]
    }
    pub fn is_identity(&self, a: ArrowId) -> bool {
        a.0 < self.objects.len()
    }

    /// Composite "first f, then g"; `None` when the pair is not composable.
    pub fn compose(&self, g: ArrowId, f: ArrowId) -> Option<ArrowId> {
        self.comp[g.0 * self.arrows.len() + f.0]
    }

    /// Arrows with domain `o`, in canonical order.
    pub fn arrows_from(&self, o: ObjId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows().filter(move |&a| self.dom(a) == o)
    }

    /// Arrows `dom -> cod`, in canonical order.
    pub fn hom_set(&self, dom: ObjId, cod: ObjId) -> Vec<ArrowId> {
        self.arrows().filter(|&a| self.dom(a) == dom && self.cod(a) == cod).collect()
    }

    pub fn to_raw(&self) -> RawCategory {
        let n = self.arrows.len();
        let mut compose = Vec::new();
        for g in self.objects.len()..n {
            for f in self.objects.len()..n {
                if let Some(gf) = self.comp[g * n + f] {
                    compose.push(RawComposite {
                        g: self.arrows[g].name.clone(),
                        f: self.arrows[f].name.clone(),
                        gf: self.arrows[gf.0].name.clone(),
                    });
                }
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            arrows: self.arrows[self.objects.len()..]
                .iter()
                .map(|a| RawArrow {
                    name: a.name.clone(),
                    dom: self.objects[a.dom.0].clone(),
                    cod: self.objects[a.cod.0].clone(),
                })
                .collect(),
            compose,
        }
    }

    /// True when every arrow has a two-sided inverse.
    pub fn is_groupoid(&self) -> bool {
        self.arrows().all(|f| {
            self.arrows().any(|g| {
                self.compose(g, f) == Some(self.identity(self.dom(f)))
                    && self.compose(f, g) == Some(self.identity(self.cod(f)))
            })
        })
    }
}

/// A span f: X -> Y, g: X -> Z that admits no comparison arrow in either
/// direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanWitness {
    pub apex: ObjId,
    pub left: ArrowId,
    pub right: ArrowId,
}

impl SpanWitness {
    pub fn display(&self, cat: &FinCat) -> String {
        format!(
            "span at {}: left {} , right {}",
            cat.object_name(self.apex),
            cat.arrow_name(self.left),
            cat.arrow_name(self.right)
        )
    }
}

/// How one leg of a span factors through the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Via {
    /// `h` with h.left = right.
    Forward(ArrowId),
    /// `h` with h.right = left.
    Backward(ArrowId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanFactorization {
    pub span: SpanWitness,
    pub via: Via,
}

/// Outcome of the local-linear-preorder check: either a factorization for
/// every span, or the first span (in canonical arrow order) with none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LlpDecision {
    Holds(Vec<SpanFactorization>),
    Fails(SpanWitness),
}

impl LlpDecision {
    pub fn holds(&self) -> bool {
        matches!(self, LlpDecision::Holds(_))
    }
}

/// Decides whether every two arrows out of a common object are comparable:
/// for f: X -> Y and g: X -> Z there must be h with h.f = g or h with
/// h.g = f.  The certificate lists one factorization per span; the first
/// direction found in canonical order wins.
pub fn is_llp(cat: &FinCat) -> LlpDecision {
    let mut cert = Vec::new();
    for f in cat.arrows() {
        for g in cat.arrows() {
            if cat.dom(f) != cat.dom(g) {
                continue;
            }
            let span = SpanWitness { apex: cat.dom(f), left: f, right: g };
            let forward = cat.arrows().find(|&h| cat.compose(h, f) == Some(g)).map(Via::Forward);
            let via = forward.or_else(|| {
                cat.arrows().find(|&h| cat.compose(h, g) == Some(f)).map(Via::Backward)
            });
            match via {
                Some(via) => cert.push(SpanFactorization { span, via }),
                None => return LlpDecision::Fails(span),
            }
        }
    }
    LlpDecision::Holds(cert)
}

/// Builds the one-object category of a finite monoid.  `table[i][j]` is the
/// product `elements[i] * elements[j]` (apply the right factor first when
/// reading products as composition).
pub fn monoid_to_cat(elements: &[String], table: &[Vec<String>], unit: &str) -> Result<FinCat> {
    let mut seen = HashSet::new();
    for e in elements {
        if !seen.insert(e.clone()) {
            return Err(Error::DuplicateName(format!("monoid element {e}")));
        }
    }
    let index: HashMap<&str, usize> =
        elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
    let u = *index.get(unit).ok_or_else(|| Error::BadUnit(format!("{unit} is not an element")))?;
    if table.len() != elements.len() || table.iter().any(|row| row.len() != elements.len()) {
        return Err(Error::BadTyping(
            "multiplication table must be square over the element list".into(),
        ));
    }
    let mut prod = vec![0usize; elements.len() * elements.len()];
    for (i, row) in table.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            prod[i * elements.len() + j] = *index.get(entry.as_str()).ok_or_else(|| {
                Error::BadTyping(format!("table entry {entry} is not an element"))
            })?;
        }
    }
    let n = elements.len();
    for i in 0..n {
        if prod[u * n + i] != i || prod[i * n + u] != i {
            return Err(Error::BadUnit(format!(
                "{unit} is not a two-sided unit at {}",
                elements[i]
            )));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if prod[prod[a * n + b] * n + c] != prod[a * n + prod[b * n + c]] {
                    return Err(Error::NotAssociative {
                        a: elements[a].clone(),
                        b: elements[b].clone(),
                        c: elements[c].clone(),
                    });
                }
            }
        }
    }
    let obj = "*".to_string();
    let mut arrows = Vec::new();
    let mut compose = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        if i == u {
            continue;
        }
        arrows.push(RawArrow { name: e.clone(), dom: obj.clone(), cod: obj.clone() });
    }
    for g in 0..n {
        for f in 0..n {
            if g == u || f == u {
                continue;
            }
            let p = prod[g * n + f];
            compose.push(RawComposite {
                g: elements[g].clone(),
                f: elements[f].clone(),
                gf: if p == u { identity_name(&obj) } else { elements[p].clone() },
            });
        }
    }
    validate_category(&RawCategory { objects: vec![obj], arrows, compose })
}

/// Builds the thin category of a finite poset from its order relation.
/// Arrow names follow the pattern `x->y` for x < y.
pub fn poset_to_cat(elements: &[String], leq: &[(String, String)]) -> Result<FinCat> {
    let mut seen = HashSet::new();
    for e in elements {
        if !seen.insert(e.clone()) {
            return Err(Error::DuplicateName(format!("poset element {e}")));
        }
    }
    let set: HashSet<&str> = elements.iter().map(|e| e.as_str()).collect();
    let mut rel = HashSet::new();
    for (x, y) in leq {
        if !set.contains(x.as_str()) {
            return Err(Error::BadTyping(format!("unknown poset element {x}")));
        }
        if !set.contains(y.as_str()) {
            return Err(Error::BadTyping(format!("unknown poset element {y}")));
        }
        rel.insert((x.as_str(), y.as_str()));
    }
    for e in elements {
        if !rel.contains(&(e.as_str(), e.as_str())) {
            return Err(Error::NotAPoset(format!("missing reflexive pair ({e}, {e})")));
        }
    }
    for &(x, y) in &rel {
        if x != y && rel.contains(&(y, x)) {
            return Err(Error::NotAPoset(format!("antisymmetry fails on ({x}, {y})")));
        }
    }
    for &(x, y) in &rel {
        for &(y2, z) in &rel {
            if y == y2 && !rel.contains(&(x, z)) {
                return Err(Error::NotAPoset(format!("transitivity fails on ({x}, {y}, {z})")));
            }
        }
    }
    let arrow_name = |x: &str, y: &str| format!("{x}->{y}");
    let mut arrows = Vec::new();
    let mut strict: Vec<(&str, &str)> = rel.iter().filter(|(x, y)| x != y).copied().collect();
    strict.sort();
    for &(x, y) in &strict {
        arrows.push(RawArrow { name: arrow_name(x, y), dom: x.to_string(), cod: y.to_string() });
    }
    let mut compose = Vec::new();
    for &(x, y) in &strict {
        for &(y2, z) in &strict {
            if y == y2 {
                compose.push(RawComposite {
                    g: arrow_name(y, z),
                    f: arrow_name(x, y),
                    gf: arrow_name(x, z),
                });
            }
        }
    }
    validate_category(&RawCategory { objects: elements.to_vec(), arrows, compose })
}

impl fmt::Display for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "category with {} objects, {} arrows",
            self.objects.len(),
            self.arrows.len() - self.objects.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn span_category_validates() {
        let cat = fixtures::span_cat();
        assert_eq!(cat.n_objects(), 3);
        assert_eq!(cat.n_arrows(), 5);
        let f = cat.arrow_id("f").unwrap();
        let g = cat.arrow_id("g").unwrap();
        assert_eq!(cat.object_name(cat.dom(f)), "Z");
        assert_eq!(cat.object_name(cat.cod(f)), "X");
        assert_eq!(cat.object_name(cat.cod(g)), "Y");
        assert_eq!(cat.compose(g, f), None);
        assert_eq!(cat.compose(cat.identity(cat.cod(f)), f), Some(f));
    }

    #[test]
    fn identity_only_category_is_valid() {
        let raw = RawCategory { objects: vec!["*".into()], arrows: vec![], compose: vec![] };
        let cat = validate_category(&raw).unwrap();
        assert_eq!(cat.n_arrows(), 1);
        assert!(is_llp(&cat).holds());
    }

    #[test]
    fn missing_composite_is_rejected() {
        let raw = RawCategory {
            objects: vec!["A".into(), "B".into(), "C".into()],
            arrows: vec![
                RawArrow { name: "u".into(), dom: "A".into(), cod: "B".into() },
                RawArrow { name: "v".into(), dom: "B".into(), cod: "C".into() },
            ],
            compose: vec![],
        };
        assert_eq!(
            validate_category(&raw),
            Err(Error::MissingComposite { g: "v".into(), f: "u".into() })
        );
    }

    #[test]
    fn ill_typed_composite_is_rejected() {
        let raw = RawCategory {
            objects: vec!["A".into(), "B".into(), "C".into()],
            arrows: vec![
                RawArrow { name: "u".into(), dom: "A".into(), cod: "B".into() },
                RawArrow { name: "v".into(), dom: "B".into(), cod: "C".into() },
                RawArrow { name: "w".into(), dom: "A".into(), cod: "B".into() },
            ],
            compose: vec![RawComposite { g: "v".into(), f: "u".into(), gf: "w".into() }],
        };
        assert!(matches!(validate_category(&raw), Err(Error::BadTyping(_))));
    }

    #[test]
    fn duplicate_arrow_name_is_rejected() {
        let raw = RawCategory {
            objects: vec!["A".into()],
            arrows: vec![
                RawArrow { name: "u".into(), dom: "A".into(), cod: "A".into() },
                RawArrow { name: "u".into(), dom: "A".into(), cod: "A".into() },
            ],
            compose: vec![],
        };
        assert_eq!(validate_category(&raw), Err(Error::DuplicateName("arrow u".into())));
    }

    #[test]
    fn reserved_identity_name_is_rejected() {
        let raw = RawCategory {
            objects: vec!["A".into()],
            arrows: vec![RawArrow { name: "id_A".into(), dom: "A".into(), cod: "A".into() }],
            compose: vec![],
        };
        assert!(matches!(validate_category(&raw), Err(Error::DuplicateName(_))));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // a.a = b and every other product a: (a.a).b = a while a.(a.b) = b.
        let raw = RawCategory {
            objects: vec!["A".into()],
            arrows: vec![
                RawArrow { name: "a".into(), dom: "A".into(), cod: "A".into() },
                RawArrow { name: "b".into(), dom: "A".into(), cod: "A".into() },
            ],
            compose: vec![
                RawComposite { g: "a".into(), f: "a".into(), gf: "b".into() },
                RawComposite { g: "a".into(), f: "b".into(), gf: "a".into() },
                RawComposite { g: "b".into(), f: "a".into(), gf: "a".into() },
                RawComposite { g: "b".into(), f: "b".into(), gf: "a".into() },
            ],
        };
        match validate_category(&raw) {
            Err(Error::NonAssociative { .. }) => {}
            other => panic!("expected NonAssociative, got {other:?}"),
        }
    }

    #[test]
    fn span_is_llp_with_z_witnessed() {
        // Only the identity arrows and f, g exist; f and g out of Z admit no
        // comparison because X and Y are disconnected.
        let cat = fixtures::span_cat();
        let f = cat.arrow_id("f").unwrap();
        let g = cat.arrow_id("g").unwrap();
        match is_llp(&cat) {
            LlpDecision::Fails(w) => {
                assert_eq!(cat.object_name(w.apex), "Z");
                assert_eq!((w.left, w.right), (f, g));
            }
            LlpDecision::Holds(_) => panic!("span category is not locally linear"),
        }
    }

    #[test]
    fn chain_poset_is_llp() {
        let cat = fixtures::chain3_cat();
        let d = is_llp(&cat);
        assert!(d.holds());
        if let LlpDecision::Holds(cert) = d {
            // One factorization per span; spans are pairs of arrows with a
            // common domain.
            let mut spans = 0;
            for f in cat.arrows() {
                for g in cat.arrows() {
                    if cat.dom(f) == cat.dom(g) {
                        spans += 1;
                    }
                }
            }
            assert_eq!(cert.len(), spans);
            for fac in cert {
                let (f, g) = (fac.span.left, fac.span.right);
                match fac.via {
                    Via::Forward(h) => assert_eq!(cat.compose(h, f), Some(g)),
                    Via::Backward(h) => assert_eq!(cat.compose(h, g), Some(f)),
                }
            }
        }
    }

    #[test]
    fn vee_poset_is_not_llp() {
        // a < b, a < c with b, c incomparable: the span (a->b, a->c) has no
        // comparison arrow.
        let cat = fixtures::vee_cat();
        match is_llp(&cat) {
            LlpDecision::Fails(w) => {
                assert_eq!(cat.object_name(w.apex), "a");
                assert_eq!(cat.arrow_name(w.left), "a->b");
                assert_eq!(cat.arrow_name(w.right), "a->c");
            }
            _ => panic!("vee poset must fail"),
        }
    }

    #[test]
    fn truncated_multiplication_monoid_fails_llp_at_2_3() {
        // 2 and 3 divide neither each other: no n with n*2 = 3 or n*3 = 2.
        let cat = fixtures::nxtrunc_cat();
        match is_llp(&cat) {
            LlpDecision::Fails(w) => {
                assert_eq!(cat.arrow_name(w.left), "2");
                assert_eq!(cat.arrow_name(w.right), "3");
            }
            _ => panic!("truncated multiplication must fail"),
        }
    }

    #[test]
    fn one_object_delooping_of_c2_is_llp_groupoid() {
        let cat = fixtures::c2_cat();
        assert!(cat.is_groupoid());
        assert!(is_llp(&cat).holds());
    }

    #[test]
    fn groupoids_are_llp() {
        // Any groupoid: comparison h = g . f^{-1} always exists.
        for cat in [fixtures::c2_cat(), fixtures::c3_cat()] {
            assert!(cat.is_groupoid());
            assert!(is_llp(&cat).holds());
        }
        assert!(!fixtures::span_cat().is_groupoid());
    }

    #[test]
    fn monoid_constructor_checks_unit_and_associativity() {
        let elems: Vec<String> = vec!["e".into(), "x".into()];
        let bad_unit = vec![vec!["e".into(), "e".into()], vec!["x".into(), "x".into()]];
        assert!(matches!(monoid_to_cat(&elems, &bad_unit, "e"), Err(Error::BadUnit(_))));
        let elems3: Vec<String> = vec!["e".into(), "x".into(), "y".into()];
        // (y*y)*y = x*y = y but y*(y*y) = y*x = x.
        let bad_assoc = vec![
            vec!["e".into(), "x".into(), "y".into()],
            vec!["x".into(), "x".into(), "y".into()],
            vec!["y".into(), "x".into(), "x".into()],
        ];
        assert!(matches!(
            monoid_to_cat(&elems3, &bad_assoc, "e"),
            Err(Error::NotAssociative { .. })
        ));
    }

    #[test]
    fn poset_constructor_rejects_cycles() {
        let elems: Vec<String> = vec!["a".into(), "b".into()];
        let leq = vec![
            ("a".to_string(), "a".to_string()),
            ("b".to_string(), "b".to_string()),
            ("a".to_string(), "b".to_string()),
            ("b".to_string(), "a".to_string()),
        ];
        assert!(matches!(poset_to_cat(&elems, &leq), Err(Error::NotAPoset(_))));
    }

    #[test]
    fn poset_llp_iff_upper_sets_are_linear() {
        // A poset is locally linear exactly when every principal upper set
        // is a chain.  Cross-check on all posets over three elements.
        let elems: Vec<String> = vec!["p".into(), "q".into(), "r".into()];
        let pairs = [("p", "q"), ("p", "r"), ("q", "r"), ("q", "p"), ("r", "p"), ("r", "q")];
        'mask: for mask in 0u32..64 {
            let mut leq: Vec<(String, String)> =
                elems.iter().map(|e| (e.clone(), e.clone())).collect();
            for (i, (x, y)) in pairs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    leq.push((x.to_string(), y.to_string()));
                }
            }
            let cat = match poset_to_cat(&elems, &leq) {
                Ok(c) => c,
                Err(_) => continue 'mask,
            };
            let le = |x: &str, y: &str| leq.iter().any(|(a, b)| a == x && b == y);
            let upper_linear = elems.iter().all(|x| {
                elems
                    .iter()
                    .all(|y| elems.iter().all(|z| !(le(x, y) && le(x, z)) || le(y, z) || le(z, y)))
            });
            assert_eq!(is_llp(&cat).holds(), upper_linear, "mask {mask}");
        }
    }

    #[test]
    fn round_trip_preserves_structure() {
        for cat in [
            fixtures::span_cat(),
            fixtures::c2_cat(),
            fixtures::chain3_cat(),
            fixtures::nxtrunc_cat(),
            fixtures::delta1op_cat(),
        ] {
            let again = validate_category(&cat.to_raw()).unwrap();
            assert_eq!(cat, again);
        }
    }
}
