//! Named example categories and presheaves used across tests, the bundled
//! fixture files, and the acceptance suite.

use std::sync::Arc;

use crate::fincat::{
    monoid_to_cat, poset_to_cat, validate_category, FinCat, RawArrow, RawCategory, RawComposite,
};
use crate::limits::{sub_square, Square};
use crate::presheaf::{generate, representable, Presheaf};

/// Objects X, Y, Z with arrows f: Z -> X and g: Z -> Y and no non-identity
/// composites.
pub fn span_cat() -> FinCat {
    validate_category(&RawCategory {
        objects: vec!["X".into(), "Y".into(), "Z".into()],
        arrows: vec![
            RawArrow { name: "f".into(), dom: "Z".into(), cod: "X".into() },
            RawArrow { name: "g".into(), dom: "Z".into(), cod: "Y".into() },
        ],
        compose: vec![],
    })
    .expect("span category is valid")
}

pub fn span_cat_arc() -> Arc<FinCat> {
    Arc::new(span_cat())
}

/// The group of order two as a one-object category.
pub fn c2_cat() -> FinCat {
    let elems: Vec<String> = vec!["e".into(), "s".into()];
    let table = vec![vec!["e".into(), "s".into()], vec!["s".into(), "e".into()]];
    monoid_to_cat(&elems, &table, "e").expect("Z/2 is a monoid")
}

pub fn c2_cat_arc() -> Arc<FinCat> {
    Arc::new(c2_cat())
}

/// The cyclic group of order three as a one-object category.
pub fn c3_cat() -> FinCat {
    let elems: Vec<String> = vec!["e".into(), "r".into(), "rr".into()];
    let table = vec![
        vec!["e".into(), "r".into(), "rr".into()],
        vec!["r".into(), "rr".into(), "e".into()],
        vec!["rr".into(), "e".into(), "r".into()],
    ];
    monoid_to_cat(&elems, &table, "e").expect("Z/3 is a monoid")
}

/// The chain 0 < 1 < 2 as a thin category.
pub fn chain3_cat() -> FinCat {
    let elems: Vec<String> = vec!["0".into(), "1".into(), "2".into()];
    let mut leq: Vec<(String, String)> = elems.iter().map(|e| (e.clone(), e.clone())).collect();
    leq.push(("0".into(), "1".into()));
    leq.push(("0".into(), "2".into()));
    leq.push(("1".into(), "2".into()));
    poset_to_cat(&elems, &leq).expect("a chain is a poset")
}

pub fn chain3_cat_arc() -> Arc<FinCat> {
    Arc::new(chain3_cat())
}

/// The poset a < b, a < c with b and c incomparable.
pub fn vee_cat() -> FinCat {
    let elems: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
    let mut leq: Vec<(String, String)> = elems.iter().map(|e| (e.clone(), e.clone())).collect();
    leq.push(("a".into(), "b".into()));
    leq.push(("a".into(), "c".into()));
    poset_to_cat(&elems, &leq).expect("the vee is a poset")
}

pub fn vee_cat_arc() -> Arc<FinCat> {
    Arc::new(vee_cat())
}

/// Multiplication on {1, 2, 3, inf} with products above 3 collapsed to inf;
/// the finite stand-in for multiplication of positive naturals.
pub fn nxtrunc_cat() -> FinCat {
    let elems: Vec<String> = vec!["1".into(), "2".into(), "3".into(), "inf".into()];
    let val = |i: usize| [1usize, 2, 3, usize::MAX][i];
    let mut table = Vec::new();
    for i in 0..4 {
        let mut row = Vec::new();
        for j in 0..4 {
            let p = val(i).saturating_mul(val(j));
            row.push(if p > 3 { "inf".to_string() } else { p.to_string() });
        }
        table.push(row);
    }
    monoid_to_cat(&elems, &table, "1").expect("truncated multiplication is a monoid")
}

pub fn nxtrunc_cat_arc() -> Arc<FinCat> {
    Arc::new(nxtrunc_cat())
}

/// The base category for reflexive graphs: vertices V, edges E, endpoint
/// arrows d0, d1: E -> V, the loop arrow s: V -> E, and the two composite
/// idempotents l0 = s.d0 and l1 = s.d1 on E.
pub fn delta1op_cat() -> FinCat {
    let arrow = |name: &str, dom: &str, cod: &str| RawArrow {
        name: name.into(),
        dom: dom.into(),
        cod: cod.into(),
    };
    let c = |g: &str, f: &str, gf: &str| RawComposite { g: g.into(), f: f.into(), gf: gf.into() };
    validate_category(&RawCategory {
        objects: vec!["E".into(), "V".into()],
        arrows: vec![
            arrow("d0", "E", "V"),
            arrow("d1", "E", "V"),
            arrow("s", "V", "E"),
            arrow("l0", "E", "E"),
            arrow("l1", "E", "E"),
        ],
        compose: vec![
            c("s", "d0", "l0"),
            c("s", "d1", "l1"),
            c("d0", "s", "id_V"),
            c("d1", "s", "id_V"),
            c("l0", "s", "s"),
            c("l1", "s", "s"),
            c("d0", "l0", "d0"),
            c("d0", "l1", "d1"),
            c("d1", "l0", "d0"),
            c("d1", "l1", "d1"),
            c("l0", "l0", "l0"),
            c("l0", "l1", "l1"),
            c("l1", "l0", "l0"),
            c("l1", "l1", "l1"),
        ],
    })
    .expect("the reflexive-graph base category is valid")
}

pub fn delta1op_cat_arc() -> Arc<FinCat> {
    Arc::new(delta1op_cat())
}

/// The representable presheaf of SPAN at the apex Z: carriers X:{f},
/// Y:{g}, Z:{id_Z}.
pub fn rep_z() -> Presheaf {
    let cat = span_cat_arc();
    let z = cat.object_id("Z").unwrap();
    representable(&cat, z)
}

/// Three disjoint full chains p, q, r over CHAIN3, each generated by its
/// level-0 element.
pub fn three_chains_presheaf() -> Presheaf {
    let cat = chain3_cat_arc();
    Presheaf::build(
        &cat,
        &[("0", &["p0", "q0", "r0"]), ("1", &["p1", "q1", "r1"]), ("2", &["p2", "q2", "r2"])],
        &[
            ("0->1", &[("p0", "p1"), ("q0", "q1"), ("r0", "r1")]),
            ("0->2", &[("p0", "p2"), ("q0", "q2"), ("r0", "r2")]),
            ("1->2", &[("p1", "p2"), ("q1", "q2"), ("r1", "r2")]),
        ],
    )
    .expect("three disjoint chains form a presheaf")
}

/// A pullback square of pure monos over CHAIN3: inside the three disjoint
/// chains, K is the p chain, A adds the q chain, B adds the r chain.
pub fn three_chains_square() -> Square {
    let l = Arc::new(three_chains_presheaf());
    let zero = l.cat().object_id("0").unwrap();
    let p0 = l.elem(zero, "p0").unwrap();
    let q0 = l.elem(zero, "q0").unwrap();
    let r0 = l.elem(zero, "r0").unwrap();
    let k = generate(&l, &[p0]);
    let a = generate(&l, &[p0, q0]);
    let b = generate(&l, &[p0, r0]);
    sub_square(&k, &a, &b).expect("chain inclusions form a square")
}

/// As [`three_chains_presheaf`], but all three chains share one top
/// element, so actions out of the side chains land in the base.
pub fn merged_chains_presheaf() -> Presheaf {
    let cat = chain3_cat_arc();
    Presheaf::build(
        &cat,
        &[("0", &["p0", "q0", "r0"]), ("1", &["p1", "q1", "r1"]), ("2", &["p2"])],
        &[
            ("0->1", &[("p0", "p1"), ("q0", "q1"), ("r0", "r1")]),
            ("0->2", &[("p0", "p2"), ("q0", "p2"), ("r0", "p2")]),
            ("1->2", &[("p1", "p2"), ("q1", "p2"), ("r1", "p2")]),
        ],
    )
    .expect("merged chains form a presheaf")
}

/// Pullback square of pure monos over the merged chains; cross equations
/// between the two sides take their common value in the shared base.
pub fn merged_chains_square() -> Square {
    let l = Arc::new(merged_chains_presheaf());
    let zero = l.cat().object_id("0").unwrap();
    let p0 = l.elem(zero, "p0").unwrap();
    let q0 = l.elem(zero, "q0").unwrap();
    let r0 = l.elem(zero, "r0").unwrap();
    let k = generate(&l, &[p0]);
    let a = generate(&l, &[p0, q0]);
    let b = generate(&l, &[p0, r0]);
    sub_square(&k, &a, &b).expect("chain inclusions form a square")
}
