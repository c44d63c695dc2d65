//! Pushouts and pullbacks of monomorphisms, computed explicitly.
//!
//! Pushouts are restricted to spans of monos, where the result is the
//! disjoint union over the shared source with deterministic element names
//! `K/...`, `A/...`, `B/...`.  Pullbacks of monos are sortwise intersections
//! relabeled by the names in the common target.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::presheaf::{intersect, Elem, Hom, Presheaf};

/// A commuting square
///
/// ```text
///        kA
///     K ----> A
///  kB |       | aL
///     v       v
///     B ----> L
///        bL
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    pub k: Arc<Presheaf>,
    pub a: Arc<Presheaf>,
    pub b: Arc<Presheaf>,
    pub l: Arc<Presheaf>,
    pub ka: Hom,
    pub kb: Hom,
    pub al: Hom,
    pub bl: Hom,
}

impl Square {
    /// Bundles four homs into a square, checking endpoint compatibility and
    /// commutativity.
    pub fn new(ka: Hom, kb: Hom, al: Hom, bl: Hom) -> Result<Square> {
        if ka.source() != kb.source() {
            return Err(Error::SourceMismatch("kA and kB must share their source K".into()));
        }
        if al.target() != bl.target() {
            return Err(Error::TargetMismatch("aL and bL must share their target L".into()));
        }
        if ka.target() != al.source() {
            return Err(Error::SourceMismatch("aL must start at the target A of kA".into()));
        }
        if kb.target() != bl.source() {
            return Err(Error::SourceMismatch("bL must start at the target B of kB".into()));
        }
        let left = al.compose(&ka)?;
        let right = bl.compose(&kb)?;
        if left != right {
            return Err(Error::IncompatibleSquare("aL . kA differs from bL . kB".into()));
        }
        Ok(Square {
            k: ka.source().clone(),
            a: ka.target().clone(),
            b: kb.target().clone(),
            l: al.target().clone(),
            ka,
            kb,
            al,
            bl,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutResult {
    pub p: Arc<Presheaf>,
    pub in_a: Hom,
    pub in_b: Hom,
}

impl PushoutResult {
    /// The pushout viewed as a commuting square K -> A, B -> P.
    pub fn as_square(&self, ka: &Hom, kb: &Hom) -> Result<Square> {
        Square::new(ka.clone(), kb.clone(), self.in_a.clone(), self.in_b.clone())
    }
}

/// Pushout of two monos with common source: the disjoint union of A and B
/// with the two copies of K identified.  Elements are named `K/x` for the
/// shared part, `A/y` and `B/z` for the rest.
pub fn pushout_monos(ka: &Hom, kb: &Hom) -> Result<PushoutResult> {
    if !ka.is_mono() {
        return Err(Error::NotMono("kA".into()));
    }
    if !kb.is_mono() {
        return Err(Error::NotMono("kB".into()));
    }
    if ka.source() != kb.source() {
        return Err(Error::SourceMismatch("pushout legs must share their source K".into()));
    }
    let k = ka.source().clone();
    let a = ka.target().clone();
    let b = kb.target().clone();
    let cat = k.cat().clone();

    // Partial inverses image(kA) -> K and image(kB) -> K.
    let mut inv_a: BTreeMap<Elem, Elem> = BTreeMap::new();
    let mut inv_b: BTreeMap<Elem, Elem> = BTreeMap::new();
    for e in k.elements() {
        inv_a.insert(ka.apply(e), e);
        inv_b.insert(kb.apply(e), e);
    }

    let name_of_a = |x: Elem| -> String {
        match inv_a.get(&x) {
            Some(&ke) => format!("K/{}", k.elem_name(ke)),
            None => format!("A/{}", a.elem_name(x)),
        }
    };
    let name_of_b = |x: Elem| -> String {
        match inv_b.get(&x) {
            Some(&ke) => format!("K/{}", k.elem_name(ke)),
            None => format!("B/{}", b.elem_name(x)),
        }
    };

    let mut carriers: Vec<(String, Vec<String>)> = Vec::new();
    for o in cat.objects() {
        let mut names: Vec<String> = Vec::new();
        names.extend(k.elements_of(o).map(|e| format!("K/{}", k.elem_name(e))));
        names.extend(
            a.elements_of(o)
                .filter(|e| !inv_a.contains_key(e))
                .map(|e| format!("A/{}", a.elem_name(e))),
        );
        names.extend(
            b.elements_of(o)
                .filter(|e| !inv_b.contains_key(e))
                .map(|e| format!("B/{}", b.elem_name(e))),
        );
        carriers.push((cat.object_name(o).to_string(), names));
    }

    // Actions: K-part elements act through K, A-part through A, B-part
    // through B; landing inside the image of K is renamed to the K-part.
    let mut actions: Vec<(String, Vec<(String, String)>)> = Vec::new();
    for f in cat.arrows() {
        if cat.is_identity(f) {
            continue;
        }
        let mut table = Vec::new();
        for e in k.elements_of(cat.dom(f)) {
            table
                .push((format!("K/{}", k.elem_name(e)), format!("K/{}", k.elem_name(k.act(f, e)))));
        }
        for e in a.elements_of(cat.dom(f)).filter(|e| !inv_a.contains_key(e)) {
            table.push((format!("A/{}", a.elem_name(e)), name_of_a(a.act(f, e))));
        }
        for e in b.elements_of(cat.dom(f)).filter(|e| !inv_b.contains_key(e)) {
            table.push((format!("B/{}", b.elem_name(e)), name_of_b(b.act(f, e))));
        }
        actions.push((cat.arrow_name(f).to_string(), table));
    }

    let carrier_slices: Vec<(&str, Vec<&str>)> = carriers
        .iter()
        .map(|(o, es)| (o.as_str(), es.iter().map(|e| e.as_str()).collect()))
        .collect();
    let carrier_refs: Vec<(&str, &[&str])> =
        carrier_slices.iter().map(|(o, es)| (*o, es.as_slice())).collect();
    let action_slices: Vec<(&str, Vec<(&str, &str)>)> = actions
        .iter()
        .map(|(f, t)| (f.as_str(), t.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect()))
        .collect();
    let action_refs: Vec<(&str, &[(&str, &str)])> =
        action_slices.iter().map(|(f, t)| (*f, t.as_slice())).collect();
    let p = Arc::new(
        Presheaf::build(&cat, &carrier_refs, &action_refs)
            .expect("amalgamated unions satisfy the functor laws"),
    );

    let in_a = Hom::from_fn(&a, &p, |x| p.elem(x.sort, &name_of_a(x)).expect("pushout covers A"))
        .expect("the A coprojection is natural");
    let in_b = Hom::from_fn(&b, &p, |x| p.elem(x.sort, &name_of_b(x)).expect("pushout covers B"))
        .expect("the B coprojection is natural");

    Ok(PushoutResult { p, in_a, in_b })
}

/// Pullback of two monos with common target: the intersection of their
/// images, named by the elements of L, completed to a square.
pub fn pullback_monos(al: &Hom, bl: &Hom) -> Result<Square> {
    if !al.is_mono() {
        return Err(Error::NotMono("aL".into()));
    }
    if !bl.is_mono() {
        return Err(Error::NotMono("bL".into()));
    }
    if al.target() != bl.target() {
        return Err(Error::TargetMismatch("pullback legs must share their target L".into()));
    }
    let a = al.source().clone();
    let b = bl.source().clone();
    let meet = intersect(&al.image(), &bl.image())?;
    let k = Arc::new(meet.to_presheaf());

    let mut inv_a: BTreeMap<Elem, Elem> = BTreeMap::new();
    for e in a.elements() {
        inv_a.insert(al.apply(e), e);
    }
    let mut inv_b: BTreeMap<Elem, Elem> = BTreeMap::new();
    for e in b.elements() {
        inv_b.insert(bl.apply(e), e);
    }
    let l = al.target().clone();
    let ka = Hom::from_fn(&k, &a, |e| {
        let in_l = l.elem(e.sort, k.elem_name(e)).expect("K elements are named after L elements");
        inv_a[&in_l]
    })?;
    let kb = Hom::from_fn(&k, &b, |e| {
        let in_l = l.elem(e.sort, k.elem_name(e)).expect("K elements are named after L elements");
        inv_b[&in_l]
    })?;
    Square::new(ka, kb, al.clone(), bl.clone())
}

/// The unique map out of the pushout determined by a square on the same
/// span: u with u . inA = aL and u . inB = bL.
pub fn induced_map(po: &PushoutResult, square: &Square) -> Result<Hom> {
    if square.a != *po.in_a.source() {
        return Err(Error::IncompatibleSquare("square side A differs from the pushout's A".into()));
    }
    if square.b != *po.in_b.source() {
        return Err(Error::IncompatibleSquare("square side B differs from the pushout's B".into()));
    }
    let p = po.p.clone();
    let mut assignment: BTreeMap<Elem, Elem> = BTreeMap::new();
    for x in square.a.elements() {
        assignment.insert(po.in_a.apply(x), square.al.apply(x));
    }
    for x in square.b.elements() {
        let target = square.bl.apply(x);
        if let Some(&prev) = assignment.get(&po.in_b.apply(x)) {
            if prev != target {
                return Err(Error::IncompatibleSquare(format!(
                    "legs disagree on the shared element {}",
                    p.qualified(po.in_b.apply(x))
                )));
            }
        }
        assignment.insert(po.in_b.apply(x), target);
    }
    if assignment.len() != p.size() {
        return Err(Error::IncompatibleSquare(
            "pushout has elements outside both coprojection images".into(),
        ));
    }
    Hom::from_fn(&p, &square.l, |e| assignment[&e])
        .map_err(|e| Error::IncompatibleSquare(format!("induced assignment is not natural: {e}")))
}

/// The square of inclusion maps for action-closed subsets K, A, B of one
/// ambient presheaf with K contained in both A and B.
pub fn sub_square(
    k: &crate::presheaf::SubPresheaf,
    a: &crate::presheaf::SubPresheaf,
    b: &crate::presheaf::SubPresheaf,
) -> Result<Square> {
    if k.ambient() != a.ambient() || a.ambient() != b.ambient() {
        return Err(Error::DifferentAmbient);
    }
    if !k.is_subset_of(a) || !k.is_subset_of(b) {
        return Err(Error::BadTyping("the base must be contained in both sides".into()));
    }
    let kp = Arc::new(k.to_presheaf());
    let ap = Arc::new(a.to_presheaf());
    let bp = Arc::new(b.to_presheaf());
    let ka = Hom::inclusion_by_name(&kp, &ap)?;
    let kb = Hom::inclusion_by_name(&kp, &bp)?;
    let al = Hom::inclusion_by_name(&ap, k.ambient())?;
    let bl = Hom::inclusion_by_name(&bp, k.ambient())?;
    Square::new(ka, kb, al, bl)
}

/// A square of monos is a pullback exactly when the image of K in L is the
/// whole intersection of the images of A and B.
pub fn is_pullback_square(square: &Square) -> Result<bool> {
    if !square.al.is_mono() {
        return Err(Error::NotMono("aL".into()));
    }
    if !square.bl.is_mono() {
        return Err(Error::NotMono("bL".into()));
    }
    let k_image = square.al.compose(&square.ka)?.image();
    let meet = intersect(&square.al.image(), &square.bl.image())?;
    Ok(k_image == meet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::presheaf::{enumerate_homs, generate, Presheaf, SubPresheaf};

    fn rep_z_arc() -> Arc<Presheaf> {
        Arc::new(fixtures::rep_z())
    }

    #[test]
    fn pushout_of_generated_g_in_rep_z_has_five_elements() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let y = cat.object_id("Y").unwrap();
        let inc = generate(&rep, &[rep.elem(y, "g").unwrap()]).inclusion_hom();
        let po = pushout_monos(&inc, &inc).unwrap();
        assert_eq!(po.p.size(), 5);
        assert!(po.in_a.is_mono());
        assert!(po.in_b.is_mono());
        let x = cat.object_id("X").unwrap();
        let z = cat.object_id("Z").unwrap();
        assert_eq!(po.p.carrier(x), ["A/f", "B/f"]);
        assert_eq!(po.p.carrier(y), ["K/g"]);
        assert_eq!(po.p.carrier(z), ["A/id_Z", "B/id_Z"]);
        // Both copies of id_Z hit the shared g.
        let g_arrow = cat.arrow_id("g").unwrap();
        let az = po.p.elem(z, "A/id_Z").unwrap();
        assert_eq!(po.p.elem_name(po.p.act(g_arrow, az)), "K/g");
    }

    #[test]
    fn pushout_along_identity_leg_is_isomorphic_to_other_side() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let sub = generate(&rep, &[rep.elem(x, "f").unwrap()]);
        let inc = sub.inclusion_hom();
        let k = inc.source().clone();
        let po = pushout_monos(&Hom::identity(&k), &inc).unwrap();
        assert_eq!(po.p.size(), rep.size());
        assert!(po.in_b.is_mono());
        assert_eq!(po.in_b.image(), SubPresheaf::whole(&po.p));
    }

    #[test]
    fn pushout_over_empty_base_is_disjoint_union() {
        let cat = fixtures::c2_cat_arc();
        let a = Arc::new(Presheaf::build(&cat, &[("*", &["p"])], &[("s", &[("p", "p")])]).unwrap());
        let b = Arc::new(Presheaf::build(&cat, &[("*", &["q"])], &[("s", &[("q", "q")])]).unwrap());
        let empty = Arc::new(Presheaf::empty(&cat));
        let ka = Hom::from_fn(&empty, &a, |_| unreachable!()).unwrap();
        let kb = Hom::from_fn(&empty, &b, |_| unreachable!()).unwrap();
        let po = pushout_monos(&ka, &kb).unwrap();
        let star = cat.object_id("*").unwrap();
        assert_eq!(po.p.carrier(star), ["A/p", "B/q"]);
    }

    #[test]
    fn non_mono_leg_is_rejected() {
        let cat = fixtures::c2_cat_arc();
        let star = cat.object_id("*").unwrap();
        let rep = Arc::new(crate::presheaf::representable(&cat, star));
        let point =
            Arc::new(Presheaf::build(&cat, &[("*", &["p"])], &[("s", &[("p", "p")])]).unwrap());
        let p = point.elem(star, "p").unwrap();
        let collapse = Hom::from_fn(&rep, &point, |_| p).unwrap();
        assert_eq!(pushout_monos(&collapse, &collapse).unwrap_err(), Error::NotMono("kA".into()));
    }

    #[test]
    fn pullback_of_disjoint_subpresheaves_is_empty() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let y = cat.object_id("Y").unwrap();
        let inc_f = generate(&rep, &[rep.elem(x, "f").unwrap()]).inclusion_hom();
        let inc_g = generate(&rep, &[rep.elem(y, "g").unwrap()]).inclusion_hom();
        let sq = pullback_monos(&inc_f, &inc_g).unwrap();
        assert_eq!(sq.k.size(), 0);
        assert!(is_pullback_square(&sq).unwrap());
    }

    #[test]
    fn pullback_of_identity_legs_is_the_whole_presheaf() {
        let rep = rep_z_arc();
        let sq = pullback_monos(&Hom::identity(&rep), &Hom::identity(&rep)).unwrap();
        assert_eq!(sq.k.size(), rep.size());
        assert_eq!(*sq.k, *rep);
    }

    #[test]
    fn pullback_of_whole_and_part_is_the_part() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let whole = SubPresheaf::whole(&rep).inclusion_hom();
        let part = generate(&rep, &[rep.elem(x, "f").unwrap()]).inclusion_hom();
        let sq = pullback_monos(&whole, &part).unwrap();
        assert_eq!(sq.k.size(), 1);
        assert_eq!(sq.k.carrier(x), ["f"]);
        assert!(is_pullback_square(&sq).unwrap());
    }

    #[test]
    fn induced_map_on_the_pushout_square_itself_is_bijective() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let y = cat.object_id("Y").unwrap();
        let inc = generate(&rep, &[rep.elem(y, "g").unwrap()]).inclusion_hom();
        let po = pushout_monos(&inc, &inc).unwrap();
        let sq = po.as_square(&inc, &inc).unwrap();
        let u = induced_map(&po, &sq).unwrap();
        assert!(u.is_mono());
        assert_eq!(u.image(), SubPresheaf::whole(&po.p));
    }

    #[test]
    fn induced_map_folding_a_coproduct_is_not_mono() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let empty = Arc::new(Presheaf::empty(&cat));
        let leg = Hom::from_fn(&empty, &rep, |_| unreachable!()).unwrap();
        let po = pushout_monos(&leg, &leg).unwrap();
        assert_eq!(po.p.size(), 2 * rep.size());
        let sq = Square::new(leg.clone(), leg.clone(), Hom::identity(&rep), Hom::identity(&rep))
            .unwrap();
        let u = induced_map(&po, &sq).unwrap();
        assert!(!u.is_mono());
    }

    #[test]
    fn induced_map_of_a_covering_pullback_square_is_bijective() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let whole = SubPresheaf::whole(&rep).inclusion_hom();
        let part = generate(&rep, &[rep.elem(x, "f").unwrap()]).inclusion_hom();
        let sq = pullback_monos(&whole, &part).unwrap();
        let po = pushout_monos(&sq.ka, &sq.kb).unwrap();
        let u = induced_map(&po, &sq).unwrap();
        assert!(u.is_mono());
        assert_eq!(u.image(), SubPresheaf::whole(&rep));
    }

    #[test]
    fn pushout_square_of_monos_is_a_pullback_square() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let y = cat.object_id("Y").unwrap();
        let inc = generate(&rep, &[rep.elem(y, "g").unwrap()]).inclusion_hom();
        let po = pushout_monos(&inc, &inc).unwrap();
        let sq = po.as_square(&inc, &inc).unwrap();
        assert!(is_pullback_square(&sq).unwrap());
    }

    #[test]
    fn empty_base_full_sides_square_is_not_a_pullback() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let empty = Arc::new(Presheaf::empty(&cat));
        let leg = Hom::from_fn(&empty, &rep, |_| unreachable!()).unwrap();
        let sq = Square::new(leg.clone(), leg, Hom::identity(&rep), Hom::identity(&rep)).unwrap();
        assert!(!is_pullback_square(&sq).unwrap());
    }

    #[test]
    fn induced_map_is_unique_at_desk_scale() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let y = cat.object_id("Y").unwrap();
        let inc = generate(&rep, &[rep.elem(y, "g").unwrap()]).inclusion_hom();
        let po = pushout_monos(&inc, &inc).unwrap();
        let sq = po.as_square(&inc, &inc).unwrap();
        let u = induced_map(&po, &sq).unwrap();
        let commuting: Vec<Hom> = enumerate_homs(&po.p, &po.p)
            .into_iter()
            .filter(|h| {
                h.compose(&po.in_a).unwrap() == sq.al && h.compose(&po.in_b).unwrap() == sq.bl
            })
            .collect();
        assert_eq!(commuting, vec![u]);
    }

    #[test]
    fn mismatched_square_is_rejected() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let y = cat.object_id("Y").unwrap();
        let inc_f = generate(&rep, &[rep.elem(x, "f").unwrap()]).inclusion_hom();
        let inc_g = generate(&rep, &[rep.elem(y, "g").unwrap()]).inclusion_hom();
        assert!(matches!(
            Square::new(inc_f.clone(), inc_f.clone(), inc_g.clone(), inc_g),
            Err(Error::SourceMismatch(_))
        ));
    }
}
