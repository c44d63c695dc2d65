//! Seeded random instance generation and exhaustive small-size
//! enumeration over the three workhorse categories.
//!
//! Random generation is driven by a ChaCha8 stream so every suite run is
//! reproducible from a single integer seed.  Enumerators produce every
//! presheaf of given carrier sizes; functor laws leave the short actions
//! free and force the composites.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fincat::FinCat;
use crate::fixtures;
use crate::limits::{sub_square, Square};
use crate::presheaf::{
    generate, intersect, validate_presheaf, Elem, Hom, Presheaf, RawPresheaf, SubPresheaf,
};
use crate::purity::{is_pure, EqSystem, Equation, Var};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The categories used by the randomized suites.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TestCat {
    Span,
    C2,
    Chain3,
}

pub fn test_cat(kind: TestCat) -> Arc<FinCat> {
    match kind {
        TestCat::Span => fixtures::span_cat_arc(),
        TestCat::C2 => fixtures::c2_cat_arc(),
        TestCat::Chain3 => fixtures::chain3_cat_arc(),
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// All functions [n] -> [m] as index vectors.
fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in all_maps(n - 1, m) {
        for v in 0..m {
            let mut map = rest.clone();
            map.push(v);
            out.push(map);
        }
    }
    out
}

fn span_raw(x: &[String], y: &[String], z: &[String], mf: &[usize], mg: &[usize]) -> RawPresheaf {
    RawPresheaf {
        category: String::new(),
        carriers: [("X", x), ("Y", y), ("Z", z)]
            .into_iter()
            .map(|(o, es)| (o.to_string(), es.to_vec()))
            .collect(),
        actions: [
            ("f", z.iter().zip(mf).map(|(e, &v)| (e.clone(), x[v].clone())).collect()),
            ("g", z.iter().zip(mg).map(|(e, &v)| (e.clone(), y[v].clone())).collect()),
        ]
        .into_iter()
        .map(|(a, t): (&str, BTreeMap<String, String>)| (a.to_string(), t))
        .collect(),
    }
}

/// Every presheaf over the span category with the given carrier sizes.
pub fn span_presheaves(sx: usize, sy: usize, sz: usize) -> Vec<Arc<Presheaf>> {
    let cat = fixtures::span_cat_arc();
    if sz > 0 && (sx == 0 || sy == 0) {
        return Vec::new();
    }
    let (x, y, z) = (names("x", sx), names("y", sy), names("z", sz));
    let mut out = Vec::new();
    for mf in all_maps(sz, sx) {
        for mg in all_maps(sz, sy) {
            out.push(Arc::new(validate_presheaf(&cat, &span_raw(&x, &y, &z, &mf, &mg)).unwrap()));
        }
    }
    out
}

fn chain3_raw(
    e0: &[String],
    e1: &[String],
    e2: &[String],
    m01: &[usize],
    m12: &[usize],
) -> RawPresheaf {
    RawPresheaf {
        category: String::new(),
        carriers: [("0", e0), ("1", e1), ("2", e2)]
            .into_iter()
            .map(|(o, es)| (o.to_string(), es.to_vec()))
            .collect(),
        actions: [
            ("0->1", e0.iter().zip(m01).map(|(e, &v)| (e.clone(), e1[v].clone())).collect()),
            ("1->2", e1.iter().zip(m12).map(|(e, &v)| (e.clone(), e2[v].clone())).collect()),
            ("0->2", e0.iter().zip(m01).map(|(e, &v)| (e.clone(), e2[m12[v]].clone())).collect()),
        ]
        .into_iter()
        .map(|(a, t): (&str, BTreeMap<String, String>)| (a.to_string(), t))
        .collect(),
    }
}

/// Every presheaf over the three-element chain with the given sizes.
pub fn chain3_presheaves(s0: usize, s1: usize, s2: usize) -> Vec<Arc<Presheaf>> {
    let cat = fixtures::chain3_cat_arc();
    if (s0 > 0 && s1 == 0) || (s1 > 0 && s2 == 0) {
        return Vec::new();
    }
    let (e0, e1, e2) = (names("x", s0), names("y", s1), names("z", s2));
    let mut out = Vec::new();
    for m01 in all_maps(s0, s1) {
        for m12 in all_maps(s1, s2) {
            out.push(Arc::new(
                validate_presheaf(&cat, &chain3_raw(&e0, &e1, &e2, &m01, &m12)).unwrap(),
            ));
        }
    }
    out
}

fn c2_raw(es: &[String], inv: &[usize]) -> RawPresheaf {
    RawPresheaf {
        category: String::new(),
        carriers: [("*".to_string(), es.to_vec())].into_iter().collect(),
        actions: [(
            "s".to_string(),
            es.iter().zip(inv).map(|(e, &v)| (e.clone(), es[v].clone())).collect(),
        )]
        .into_iter()
        .collect(),
    }
}

/// Every presheaf over the two-element group with the given size: the
/// involutions.
pub fn c2_presheaves(s: usize) -> Vec<Arc<Presheaf>> {
    let cat = fixtures::c2_cat_arc();
    let es = names("x", s);
    all_maps(s, s)
        .into_iter()
        .filter(|m| (0..s).all(|i| m[m[i]] == i))
        .map(|m| Arc::new(validate_presheaf(&cat, &c2_raw(&es, &m)).unwrap()))
        .collect()
}

/// Every span-category presheaf of total size at most `max`.
pub fn span_presheaves_up_to(max: usize) -> Vec<Arc<Presheaf>> {
    let mut out = Vec::new();
    for sx in 0..=max {
        for sy in 0..=(max - sx) {
            for sz in 0..=(max - sx - sy) {
                out.extend(span_presheaves(sx, sy, sz));
            }
        }
    }
    out
}

pub fn c2_presheaves_up_to(max: usize) -> Vec<Arc<Presheaf>> {
    (0..=max).flat_map(c2_presheaves).collect()
}

/// Random presheaf over the chosen category with total size <= max_total.
pub fn random_presheaf(rng: &mut ChaCha8Rng, kind: TestCat, max_total: usize) -> Arc<Presheaf> {
    match kind {
        TestCat::Span => {
            let (sx, sy, sz) = loop {
                let sx = rng.gen_range(0..=max_total);
                let sy = rng.gen_range(0..=(max_total - sx));
                let sz = rng.gen_range(0..=(max_total - sx - sy));
                if sz == 0 || (sx > 0 && sy > 0) {
                    break (sx, sy, sz);
                }
            };
            let (x, y, z) = (names("x", sx), names("y", sy), names("z", sz));
            let mf: Vec<usize> = (0..sz).map(|_| rng.gen_range(0..sx)).collect();
            let mg: Vec<usize> = (0..sz).map(|_| rng.gen_range(0..sy)).collect();
            Arc::new(
                validate_presheaf(&fixtures::span_cat_arc(), &span_raw(&x, &y, &z, &mf, &mg))
                    .unwrap(),
            )
        }
        TestCat::Chain3 => {
            let (s0, s1, s2) = loop {
                let s0 = rng.gen_range(0..=max_total);
                let s1 = rng.gen_range(0..=(max_total - s0));
                let s2 = rng.gen_range(0..=(max_total - s0 - s1));
                if (s0 == 0 || s1 > 0) && (s1 == 0 || s2 > 0) {
                    break (s0, s1, s2);
                }
            };
            let (e0, e1, e2) = (names("x", s0), names("y", s1), names("z", s2));
            let m01: Vec<usize> = (0..s0).map(|_| rng.gen_range(0..s1)).collect();
            let m12: Vec<usize> = (0..s1).map(|_| rng.gen_range(0..s2)).collect();
            Arc::new(
                validate_presheaf(
                    &fixtures::chain3_cat_arc(),
                    &chain3_raw(&e0, &e1, &e2, &m01, &m12),
                )
                .unwrap(),
            )
        }
        TestCat::C2 => {
            let s = rng.gen_range(0..=max_total);
            let mut inv: Vec<usize> = (0..s).collect();
            let mut pool: Vec<usize> = (0..s).collect();
            while pool.len() >= 2 {
                let i = pool.remove(0);
                if rng.gen_bool(0.5) {
                    let j = pool.remove(rng.gen_range(0..pool.len()));
                    inv[i] = j;
                    inv[j] = i;
                }
            }
            let es = names("x", s);
            Arc::new(validate_presheaf(&fixtures::c2_cat_arc(), &c2_raw(&es, &inv)).unwrap())
        }
    }
}

/// Random action-closed subpresheaf: a random generating set, closed.
pub fn random_sub(rng: &mut ChaCha8Rng, l: &Arc<Presheaf>) -> SubPresheaf {
    let gens: Vec<Elem> = l.elements().filter(|_| rng.gen_bool(0.5)).collect();
    generate(l, &gens)
}

/// Inclusion of one subpresheaf into a larger one of the same ambient,
/// as a map between their standalone presheaves.
pub fn incl_between(inner: &SubPresheaf, outer: &SubPresheaf) -> Result<Hom> {
    let src = Arc::new(inner.to_presheaf());
    let tgt = Arc::new(outer.to_presheaf());
    Hom::inclusion_by_name(&src, &tgt)
}

fn leg_is_pure(leg: &Hom) -> bool {
    is_pure(leg).map(|c| c.is_pure()).unwrap_or(false)
}

/// Rejection-samples a pullback square K = A n B inside a random L whose
/// four inclusion legs are all pure monos.
pub fn random_pure_pullback_square(
    rng: &mut ChaCha8Rng,
    kind: TestCat,
    max_total: usize,
) -> Square {
    loop {
        let l = random_presheaf(rng, kind, max_total);
        let a = random_sub(rng, &l);
        let b = random_sub(rng, &l);
        let k = intersect(&a, &b).expect("same ambient");
        let Ok(sq) = sub_square(&k, &a, &b) else { continue };
        if [&sq.ka, &sq.kb, &sq.al, &sq.bl].into_iter().all(leg_is_pure) {
            return sq;
        }
    }
}

/// Builds an equation system over the union P of a square, solvable in L
/// by construction: values are chosen first, then only equations that
/// already hold of them are emitted.
pub fn random_solvable_system(
    rng: &mut ChaCha8Rng,
    square: &Square,
    p: &Arc<Presheaf>,
    u: &Hom,
    max_vars: usize,
) -> (EqSystem, Vec<Elem>) {
    let l = &square.l;
    let pool: Vec<Elem> = l.elements().collect();
    if pool.is_empty() {
        return (EqSystem::default(), Vec::new());
    }
    let n_vars = rng.gen_range(1..=max_vars);
    let values: Vec<Elem> = (0..n_vars).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
    let vars: Vec<Var> = values
        .iter()
        .enumerate()
        .map(|(i, v)| Var { name: format!("x{i}"), sort: v.sort })
        .collect();
    let cat = l.cat().clone();
    let mut eqs = Vec::new();
    for _ in 0..rng.gen_range(0..=2 * n_vars) {
        let i = rng.gen_range(0..n_vars);
        let from: Vec<_> = cat.arrows_from(values[i].sort).collect();
        let f = from[rng.gen_range(0..from.len())];
        let value = l.act(f, values[i]);
        if rng.gen_bool(0.5) {
            // A link onto any other application with the same value.
            let candidates: Vec<(usize, crate::fincat::ArrowId)> = (0..n_vars)
                .flat_map(|j| {
                    cat.arrows_from(values[j].sort)
                        .filter(|&g| l.act(g, values[j]) == value)
                        .map(move |g| (j, g))
                        .collect::<Vec<_>>()
                })
                .collect();
            if !candidates.is_empty() {
                let (j, g) = candidates[rng.gen_range(0..candidates.len())];
                eqs.push(Equation::Link { f, i, g, j });
            }
        } else if let Some(d) = p.elements().find(|&d| u.apply(d) == value) {
            eqs.push(Equation::Anchor { f, i, p: d });
        }
    }
    (EqSystem { vars, eqs }, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::{induced_map, is_pullback_square, pushout_monos};

    #[test]
    fn enumerators_respect_the_functor_laws() {
        assert_eq!(span_presheaves(2, 1, 2).len(), 4);
        assert_eq!(span_presheaves(0, 0, 1).len(), 0);
        assert_eq!(chain3_presheaves(1, 2, 2).len(), 8);
        assert_eq!(chain3_presheaves(1, 0, 2).len(), 0);
        // Involution counts over sizes 0..4.
        let counts: Vec<usize> = (0..=4).map(|s| c2_presheaves(s).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 10]);
    }

    #[test]
    fn random_presheaves_are_valid_and_bounded() {
        let mut rng = rng_from_seed(7);
        for kind in [TestCat::Span, TestCat::C2, TestCat::Chain3] {
            for _ in 0..50 {
                let p = random_presheaf(&mut rng, kind, 8);
                assert!(p.size() <= 8);
            }
        }
    }

    #[test]
    fn random_subs_are_action_closed() {
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let l = random_presheaf(&mut rng, TestCat::Chain3, 8);
            let s = random_sub(&mut rng, &l);
            for e in s.elements() {
                for f in l.cat().arrows_from(e.sort) {
                    assert!(s.contains(l.act(f, e)));
                }
            }
        }
    }

    #[test]
    fn sampled_squares_are_pullbacks_of_pure_monos() {
        let mut rng = rng_from_seed(3);
        for kind in [TestCat::C2, TestCat::Chain3] {
            let sq = random_pure_pullback_square(&mut rng, kind, 6);
            assert!(is_pullback_square(&sq).unwrap());
            assert!(leg_is_pure(&sq.ka));
        }
    }

    #[test]
    fn generated_systems_hold_of_their_chosen_values() {
        let mut rng = rng_from_seed(5);
        for _ in 0..10 {
            let sq = random_pure_pullback_square(&mut rng, TestCat::Chain3, 6);
            let po = pushout_monos(&sq.ka, &sq.kb).unwrap();
            let u = induced_map(&po, &sq).unwrap();
            let (sys, values) = random_solvable_system(&mut rng, &sq, &po.p, &u, 4);
            sys.validate(&po.p).unwrap();
            // The defining property: every equation holds of the values
            // in L, reading anchor parameters through u.
            for eq in &sys.eqs {
                match *eq {
                    Equation::Link { f, i, g, j } => {
                        assert_eq!(sq.l.act(f, values[i]), sq.l.act(g, values[j]));
                    }
                    Equation::Anchor { f, i, p } => {
                        assert_eq!(sq.l.act(f, values[i]), u.apply(p));
                    }
                }
            }
        }
    }

    #[test]
    fn same_seed_reproduces_the_same_stream() {
        let a = random_presheaf(&mut rng_from_seed(42), TestCat::Span, 8);
        let b = random_presheaf(&mut rng_from_seed(42), TestCat::Span, 8);
        assert_eq!(a.as_ref(), b.as_ref());
    }
}
