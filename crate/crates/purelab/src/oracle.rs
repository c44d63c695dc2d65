//! Brute-force purity reference used to cross-check the retraction
//! criterion at small size.
//!
//! Deliberately independent of the constraint solver: assignments of the
//! outside tuple into the candidate subpresheaf are enumerated with a
//! plain odometer and the atomic facts of the tuple are checked directly
//! against the ambient action.

use crate::presheaf::{Elem, Presheaf, SubPresheaf};

fn satisfies(l: &Presheaf, k: &SubPresheaf, outside: &[Elem], assign: &[Elem]) -> bool {
    let cat = l.cat();
    for (i, &x) in outside.iter().enumerate() {
        for f in cat.arrows_from(x.sort) {
            let v = l.act(f, x);
            // Parameters: applications landing in K must be hit exactly.
            if k.contains(v) && l.act(f, assign[i]) != v {
                return false;
            }
            // Equalities between any two applications of the tuple.
            for (j, &y) in outside.iter().enumerate() {
                for g in cat.arrows_from(y.sort) {
                    if l.act(g, y) == v && l.act(f, assign[i]) != l.act(g, assign[j]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// True when the inclusion of `k` into its ambient presheaf is pure in
/// the sense of the finite system test: every inhabited sort stays
/// inhabited, and the full atomic diagram of the tuple of outside
/// elements (with parameters in `k`) has a solution with values in `k`.
pub fn pure_by_exhaustion(k: &SubPresheaf) -> bool {
    let l = k.ambient();
    for o in l.cat().objects() {
        if !l.carrier(o).is_empty() && k.elements().all(|e| e.sort != o) {
            return false;
        }
    }
    let outside: Vec<Elem> = k.complement().collect();
    let domains: Vec<Vec<Elem>> =
        outside.iter().map(|x| k.elements().filter(|e| e.sort == x.sort).collect()).collect();
    let mut idx = vec![0usize; outside.len()];
    loop {
        let assign: Vec<Elem> = idx.iter().zip(&domains).map(|(&i, d)| d[i]).collect();
        if satisfies(l, k, &outside, &assign) {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < domains[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
