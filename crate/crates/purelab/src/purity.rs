//! Equation systems over presheaves, purity of monomorphisms, pure
//! effectiveness of squares, and solution amalgamation.
//!
//! A system consists of typed variables and equations of two shapes:
//! `Link(f, i, g, j)` meaning f . x_i = g . x_j and `Anchor(f, i, p)`
//! meaning f . x_i = p for a parameter element p.  Purity of an inclusion
//! K <= L is decided through a retraction search: the canonical system of
//! the full tuple of elements outside K, solved inside K.  A solution is a
//! retraction L -> K, and conversely; solvability of every L-solvable
//! system in K reduces to this strongest one.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::connectivity::components_outside;
use crate::error::{Error, Result};
use crate::fincat::{ArrowId, ObjId};
use crate::limits::{induced_map, is_pullback_square, pushout_monos, Square};
use crate::presheaf::{Elem, Hom, Presheaf, SubPresheaf};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    pub sort: ObjId,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Equation {
    /// f . x_i = g . x_j
    Link { f: ArrowId, i: usize, g: ArrowId, j: usize },
    /// f . x_i = p
    Anchor { f: ArrowId, i: usize, p: Elem },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EqSystem {
    pub vars: Vec<Var>,
    pub eqs: Vec<Equation>,
}

/// Wire format of a system.  Anchor parameters are element names; their
/// sort is determined by the arrow's codomain.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawEqSystem {
    pub vars: Vec<RawVar>,
    pub eqs: Vec<RawEquation>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawVar {
    pub name: String,
    pub sort: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RawEquation {
    Link { f: String, i: usize, g: String, j: usize },
    Anchor { f: String, i: usize, p: String },
}

impl EqSystem {
    pub fn from_raw(m: &Presheaf, raw: &RawEqSystem) -> Result<EqSystem> {
        let cat = m.cat();
        let vars = raw
            .vars
            .iter()
            .map(|v| Ok(Var { name: v.name.clone(), sort: cat.object_id(&v.sort)? }))
            .collect::<Result<Vec<_>>>()?;
        let eqs = raw
            .eqs
            .iter()
            .map(|eq| match eq {
                RawEquation::Link { f, i, g, j } => {
                    Ok(Equation::Link { f: cat.arrow_id(f)?, i: *i, g: cat.arrow_id(g)?, j: *j })
                }
                RawEquation::Anchor { f, i, p } => {
                    let f = cat.arrow_id(f)?;
                    Ok(Equation::Anchor { f, i: *i, p: m.elem(cat.cod(f), p)? })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let sys = EqSystem { vars, eqs };
        sys.validate(m)?;
        Ok(sys)
    }

    pub fn to_raw(&self, m: &Presheaf) -> RawEqSystem {
        let cat = m.cat();
        RawEqSystem {
            vars: self
                .vars
                .iter()
                .map(|v| RawVar { name: v.name.clone(), sort: cat.object_name(v.sort).to_string() })
                .collect(),
            eqs: self
                .eqs
                .iter()
                .map(|eq| match *eq {
                    Equation::Link { f, i, g, j } => RawEquation::Link {
                        f: cat.arrow_name(f).to_string(),
                        i,
                        g: cat.arrow_name(g).to_string(),
                        j,
                    },
                    Equation::Anchor { f, i, p } => RawEquation::Anchor {
                        f: cat.arrow_name(f).to_string(),
                        i,
                        p: m.elem_name(p).to_string(),
                    },
                })
                .collect(),
        }
    }

    /// Checks sort-correctness of every equation against a presheaf
    /// providing the parameters.
    pub fn validate(&self, m: &Presheaf) -> Result<()> {
        let cat = m.cat();
        for eq in &self.eqs {
            match *eq {
                Equation::Link { f, i, g, j } => {
                    if i >= self.vars.len() || j >= self.vars.len() {
                        return Err(Error::BadParameters(
                            "equation refers to a variable index out of range".into(),
                        ));
                    }
                    if cat.dom(f) != self.vars[i].sort || cat.dom(g) != self.vars[j].sort {
                        return Err(Error::SortMismatch(format!(
                            "link {} . {} = {} . {}: arrow domain differs from variable sort",
                            cat.arrow_name(f),
                            self.vars[i].name,
                            cat.arrow_name(g),
                            self.vars[j].name
                        )));
                    }
                    if cat.cod(f) != cat.cod(g) {
                        return Err(Error::SortMismatch(format!(
                            "link arrows {} and {} have different codomains",
                            cat.arrow_name(f),
                            cat.arrow_name(g)
                        )));
                    }
                }
                Equation::Anchor { f, i, p } => {
                    if i >= self.vars.len() {
                        return Err(Error::BadParameters(
                            "equation refers to a variable index out of range".into(),
                        ));
                    }
                    if cat.dom(f) != self.vars[i].sort {
                        return Err(Error::SortMismatch(format!(
                            "anchor {} . {}: arrow domain differs from variable sort",
                            cat.arrow_name(f),
                            self.vars[i].name
                        )));
                    }
                    if p.sort != cat.cod(f) {
                        return Err(Error::SortMismatch(format!(
                            "anchor parameter sort differs from codomain of {}",
                            cat.arrow_name(f)
                        )));
                    }
                    if p.idx >= m.carrier(p.sort).len() {
                        return Err(Error::BadParameters(
                            "anchor parameter is not an element of the presheaf".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Direct check that an assignment satisfies every equation in `m`.
pub fn eval_system(m: &Presheaf, sys: &EqSystem, assignment: &[Elem]) -> bool {
    debug_assert_eq!(assignment.len(), sys.vars.len());
    sys.eqs.iter().all(|eq| match *eq {
        Equation::Link { f, i, g, j } => m.act(f, assignment[i]) == m.act(g, assignment[j]),
        Equation::Anchor { f, i, p } => m.act(f, assignment[i]) == p,
    })
}

fn ac3(
    m: &Presheaf,
    links: &[(ArrowId, usize, ArrowId, usize)],
    domains: &mut [Vec<Elem>],
) -> bool {
    let mut queue: VecDeque<usize> = (0..2 * links.len()).collect();
    while let Some(arc) = queue.pop_front() {
        let (f, i, g, j) = links[arc / 2];
        let (f, i, g, j) = if arc % 2 == 0 { (f, i, g, j) } else { (g, j, f, i) };
        let before = domains[i].len();
        let witnesses: Vec<Elem> = domains[j].iter().map(|&y| m.act(g, y)).collect();
        domains[i].retain(|&x| witnesses.contains(&m.act(f, x)));
        if domains[i].is_empty() {
            return false;
        }
        if domains[i].len() < before {
            for (other, &(_, oi, _, oj)) in links.iter().enumerate() {
                if oi == i {
                    queue.push_back(2 * other + 1);
                }
                if oj == i {
                    queue.push_back(2 * other);
                }
            }
        }
    }
    true
}

fn backtrack(
    m: &Presheaf,
    links: &[(ArrowId, usize, ArrowId, usize)],
    domains: &mut [Vec<Elem>],
) -> Option<Vec<Elem>> {
    // Most-constrained variable first; all domains are arc-consistent here.
    let next =
        (0..domains.len()).filter(|&v| domains[v].len() > 1).min_by_key(|&v| domains[v].len());
    let Some(v) = next else {
        let assignment: Vec<Elem> = domains.iter().map(|d| d[0]).collect();
        let ok =
            links.iter().all(|&(f, i, g, j)| m.act(f, assignment[i]) == m.act(g, assignment[j]));
        return ok.then_some(assignment);
    };
    for x in domains[v].clone() {
        let mut narrowed = domains.to_vec();
        narrowed[v] = vec![x];
        if ac3(m, links, &mut narrowed) {
            if let Some(sol) = backtrack(m, links, &mut narrowed) {
                return Some(sol);
            }
        }
    }
    None
}

/// Searches for a total sort-correct assignment of the system's variables
/// into `m` (or into `restrict` if given) satisfying every equation.
/// Deterministic: anchor and same-variable constraints are applied first,
/// then arc consistency over links, then most-constrained-first
/// backtracking in canonical element order.
pub fn solve_system(
    m: &Arc<Presheaf>,
    sys: &EqSystem,
    restrict: Option<&SubPresheaf>,
) -> Result<Option<Vec<Elem>>> {
    sys.validate(m)?;
    if let Some(r) = restrict {
        if r.ambient() != m {
            return Err(Error::BadParameters(
                "restriction is not a subpresheaf of the solving presheaf".into(),
            ));
        }
        for eq in &sys.eqs {
            if let Equation::Anchor { p, .. } = *eq {
                if !r.contains(p) {
                    return Err(Error::BadParameters(format!(
                        "anchor parameter {} lies outside the restriction",
                        m.qualified(p)
                    )));
                }
            }
        }
    }
    let mut domains: Vec<Vec<Elem>> = sys
        .vars
        .iter()
        .map(|v| match restrict {
            Some(r) => r.elements().filter(|e| e.sort == v.sort).collect(),
            None => m.elements_of(v.sort).collect(),
        })
        .collect();
    for eq in &sys.eqs {
        match *eq {
            Equation::Anchor { f, i, p } => domains[i].retain(|&x| m.act(f, x) == p),
            Equation::Link { f, i, g, j } if i == j => {
                domains[i].retain(|&x| m.act(f, x) == m.act(g, x))
            }
            Equation::Link { .. } => {}
        }
    }
    let links: Vec<(ArrowId, usize, ArrowId, usize)> = sys
        .eqs
        .iter()
        .filter_map(|eq| match *eq {
            Equation::Link { f, i, g, j } if i != j => Some((f, i, g, j)),
            _ => None,
        })
        .collect();
    if domains.iter().any(|d| d.is_empty()) {
        return Ok(None);
    }
    if !ac3(m, &links, &mut domains) {
        return Ok(None);
    }
    Ok(backtrack(m, &links, &mut domains))
}

/// The canonical system of the duplicate-free tuple of all elements
/// outside `k`: one variable per outside element, plus every link and
/// anchor equation that holds of the tuple in the ambient presheaf with
/// parameters inside `k`.  Returns the system together with the tuple
/// itself, which solves it in the ambient presheaf.
pub fn canonical_system(k: &SubPresheaf) -> (EqSystem, Vec<Elem>) {
    let l = k.ambient();
    let cat = l.cat();
    let tuple: Vec<Elem> = k.complement().collect();
    let vars: Vec<Var> =
        tuple.iter().map(|&e| Var { name: l.qualified(e), sort: e.sort }).collect();
    let mut eqs = Vec::new();
    let applications: Vec<(usize, ArrowId, Elem)> = tuple
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| {
            cat.arrows_from(x.sort).map(move |f| (i, f, l.act(f, x))).collect::<Vec<_>>()
        })
        .collect();
    for &(i, f, v) in &applications {
        if k.contains(v) {
            eqs.push(Equation::Anchor { f, i, p: v });
        }
    }
    for (a, &(i, f, v)) in applications.iter().enumerate() {
        for &(j, g, w) in &applications[a + 1..] {
            if v == w {
                eqs.push(Equation::Link { f, i, g, j });
            }
        }
    }
    (EqSystem { vars, eqs }, tuple)
}

/// Outcome of the purity decision for a monomorphism K -> L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PurityCertificate {
    /// A retraction r: L -> K with r . incl = id.
    Pure { retraction: Hom },
    /// A system solvable in L (by the attached assignment) but not in K.
    NotPure { falsifier: EqSystem, solution_in_l: Vec<Elem> },
}

impl PurityCertificate {
    pub fn is_pure(&self) -> bool {
        matches!(self, PurityCertificate::Pure { .. })
    }
}

fn retraction_search(incl: &Hom) -> Result<std::result::Result<Hom, (EqSystem, Vec<Elem>)>> {
    if !incl.is_mono() {
        return Err(Error::NotMono("the inclusion map".into()));
    }
    let l = incl.target().clone();
    let k_img = incl.image();
    // A sort that empties out refutes purity by a closed one-variable
    // sentence; report the first such sort.
    for o in l.cat().objects() {
        if !l.carrier(o).is_empty() && k_img.elements().all(|e| e.sort != o) {
            let falsifier = EqSystem { vars: vec![Var { name: "y".into(), sort: o }], eqs: vec![] };
            let witness = l.elements_of(o).next().expect("carrier is nonempty");
            return Ok(Err((falsifier, vec![witness])));
        }
    }
    let (sys, tuple) = canonical_system(&k_img);
    match solve_system(&l, &sys, Some(&k_img))? {
        Some(values) => {
            let mut inv: HashMap<Elem, Elem> = HashMap::new();
            for e in incl.source().elements() {
                inv.insert(incl.apply(e), e);
            }
            let var_index: HashMap<Elem, usize> =
                tuple.iter().enumerate().map(|(i, &e)| (e, i)).collect();
            let retraction = Hom::from_fn(&l, incl.source(), |x| {
                if k_img.contains(x) {
                    inv[&x]
                } else {
                    inv[&values[var_index[&x]]]
                }
            })
            .expect("solutions of the canonical system are natural retractions");
            Ok(Ok(retraction))
        }
        None => Ok(Err((sys, tuple))),
    }
}

/// Decides purity of a monomorphism.  At finite scale purity is equivalent
/// to the existence of a retraction: a retraction transports any solvable
/// system into K directly, and conversely a K-solution of the canonical
/// system of the full outside tuple is exactly a retraction.
pub fn is_pure(incl: &Hom) -> Result<PurityCertificate> {
    Ok(match retraction_search(incl)? {
        Ok(retraction) => PurityCertificate::Pure { retraction },
        Err((falsifier, solution_in_l)) => PurityCertificate::NotPure { falsifier, solution_in_l },
    })
}

/// Decides whether a monomorphism splits, returning the retraction.
pub fn is_split(incl: &Hom) -> Result<Option<Hom>> {
    Ok(retraction_search(incl)?.ok())
}

/// Outcome of the pure-effectiveness decision for a square of pure monos.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PureEffectiveDecision {
    PureEffective { induced: Hom, retraction: Hom },
    InducedNotMono { induced: Hom },
    InducedNotPure { induced: Hom, falsifier: EqSystem, solution_in_l: Vec<Elem> },
}

impl PureEffectiveDecision {
    pub fn holds(&self) -> bool {
        matches!(self, PureEffectiveDecision::PureEffective { .. })
    }
}

fn check_legs_pure(square: &Square) -> Result<()> {
    let legs = [(&square.ka, "kA"), (&square.kb, "kB"), (&square.al, "aL"), (&square.bl, "bL")];
    for (leg, name) in legs {
        match is_pure(leg) {
            Ok(PurityCertificate::Pure { .. }) => {}
            Ok(PurityCertificate::NotPure { .. }) | Err(Error::NotMono(_)) => {
                return Err(Error::NotPureInputs(name.into()));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Decides whether a square of pure monos is pure effective: the induced
/// map out of the pushout of its span must be a pure monomorphism.
pub fn is_pure_effective(square: &Square) -> Result<PureEffectiveDecision> {
    check_legs_pure(square)?;
    let po = pushout_monos(&square.ka, &square.kb)?;
    let induced = induced_map(&po, square)?;
    if !induced.is_mono() {
        return Ok(PureEffectiveDecision::InducedNotMono { induced });
    }
    Ok(match is_pure(&induced)? {
        PurityCertificate::Pure { retraction } => {
            PureEffectiveDecision::PureEffective { induced, retraction }
        }
        PurityCertificate::NotPure { falsifier, solution_in_l } => {
            PureEffectiveDecision::InducedNotPure { induced, falsifier, solution_in_l }
        }
    })
}

/// Transports a solution of a system over the union P = A u_K B from the
/// ambient L back into P.
///
/// Equations are partitioned by where their values fall.  Link equations
/// whose common value lies in K are replaced by two anchors onto that
/// value.  The remaining equations and the elements outside K form a
/// graph; variables connected to the A side are solved in A, the rest in
/// B, each by [`solve_system`] restricted to that side.  Purity of the
/// sides makes both sub-solves succeed, and disjoint connectivity outside
/// K keeps the two sides consistent.
pub fn amalgamate_solution(square: &Square, sigma: &EqSystem, sol: &[Elem]) -> Result<Vec<Elem>> {
    check_legs_pure(square)?;
    if !is_pullback_square(square)? {
        return Err(Error::NotPullback("amalgamation requires K = A n B inside L".into()));
    }
    let po = pushout_monos(&square.ka, &square.kb)?;
    let p = po.p.clone();
    let u = induced_map(&po, square)?;
    debug_assert!(u.is_mono(), "pullback squares of monos embed their union");

    let k_in_l = square.al.compose(&square.ka)?.image();
    let a_in_l = square.al.image();
    let b_in_l = square.bl.image();
    let l = square.l.clone();
    for class in &components_outside(&k_in_l).components {
        let touches_a = class.iter().any(|&e| a_in_l.contains(e) && !k_in_l.contains(e));
        let touches_b = class.iter().any(|&e| b_in_l.contains(e) && !k_in_l.contains(e));
        if touches_a && touches_b {
            return Err(Error::ConnectivityPreconditionFailed(l.qualified(class[0])));
        }
    }

    sigma.validate(&p)?;
    if sol.len() != sigma.vars.len() {
        return Err(Error::BadParameters("solution length differs from the variable count".into()));
    }
    for (i, var) in sigma.vars.iter().enumerate() {
        if sol[i].sort != var.sort || sol[i].idx >= l.carrier(sol[i].sort).len() {
            return Err(Error::SortMismatch(format!(
                "solution value for {} is not an element of L at the variable's sort",
                var.name
            )));
        }
    }
    for eq in &sigma.eqs {
        let holds = match *eq {
            Equation::Link { f, i, g, j } => l.act(f, sol[i]) == l.act(g, sol[j]),
            Equation::Anchor { f, i, p: prm } => l.act(f, sol[i]) == u.apply(prm),
        };
        if !holds {
            return Err(Error::NotSolvableInL(format!(
                "equation {:?} fails under the supplied assignment",
                sigma.to_raw(&p).eqs[sigma.eqs.iter().position(|e| e == eq).unwrap()]
            )));
        }
    }

    let k_in_p = po.in_a.compose(&square.ka)?.image();
    let a_in_p = po.in_a.image();
    // Classify each equation; links through K split into two anchors.
    enum Placed {
        Kept(Equation),
        SplitLink { f: ArrowId, i: usize, g: ArrowId, j: usize, d: Elem },
    }
    let mut placed = Vec::new();
    for eq in &sigma.eqs {
        match *eq {
            Equation::Link { f, i, g, j } => {
                let value_l = l.act(f, sol[i]);
                if k_in_l.contains(value_l) {
                    let d = k_in_p
                        .elements()
                        .find(|&e| u.apply(e) == value_l)
                        .expect("K maps onto K under the induced embedding");
                    placed.push(Placed::SplitLink { f, i, g, j, d });
                } else {
                    placed.push(Placed::Kept(*eq));
                }
            }
            Equation::Anchor { .. } => placed.push(Placed::Kept(*eq)),
        }
    }

    // Union-find over variables and the elements of P outside K: linked
    // variables stick together, anchors outside K tie variables to their
    // parameter's side, and single-step actions connect the outside
    // elements themselves.
    let n_vars = sigma.vars.len();
    let outside: Vec<Elem> = k_in_p.complement().collect();
    let elem_vertex: HashMap<Elem, usize> =
        outside.iter().enumerate().map(|(i, &e)| (e, n_vars + i)).collect();
    let mut parent: Vec<usize> = (0..n_vars + outside.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    let union = |parent: &mut Vec<usize>, i: usize, j: usize| {
        let (ri, rj) = (find(parent, i), find(parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
        }
    };
    for pl in &placed {
        match *pl {
            Placed::Kept(Equation::Link { i, j, .. }) => union(&mut parent, i, j),
            Placed::Kept(Equation::Anchor { p: prm, .. }) => {
                if let Some(&v) = elem_vertex.get(&prm) {
                    let Placed::Kept(Equation::Anchor { i, .. }) = *pl else { unreachable!() };
                    union(&mut parent, i, v);
                }
            }
            Placed::SplitLink { .. } => {}
        }
    }
    let cat = p.cat().clone();
    for &x in &outside {
        for f in cat.arrows_from(x.sort) {
            let y = p.act(f, x);
            if y != x && !k_in_p.contains(y) {
                union(&mut parent, elem_vertex[&x], elem_vertex[&y]);
            }
        }
    }
    let mut root_in_a: HashMap<usize, bool> = HashMap::new();
    for &e in &outside {
        let root = find(&mut parent, elem_vertex[&e]);
        if a_in_p.contains(e) {
            root_in_a.insert(root, true);
        }
    }
    let side_a: Vec<bool> = (0..n_vars)
        .map(|i| {
            let root = find(&mut parent, i);
            root_in_a.get(&root).copied().unwrap_or(false)
        })
        .collect();

    // Assemble and solve the two side systems.
    let build_side = |want_a: bool| -> (EqSystem, Vec<usize>) {
        let orig: Vec<usize> = (0..n_vars).filter(|&i| side_a[i] == want_a).collect();
        let local: HashMap<usize, usize> =
            orig.iter().enumerate().map(|(li, &oi)| (oi, li)).collect();
        let mut eqs = Vec::new();
        for pl in &placed {
            match *pl {
                Placed::Kept(Equation::Link { f, i, g, j }) => {
                    if side_a[i] == want_a {
                        debug_assert_eq!(side_a[j], want_a, "linked variables share a side");
                        eqs.push(Equation::Link { f, i: local[&i], g, j: local[&j] });
                    }
                }
                Placed::Kept(Equation::Anchor { f, i, p: prm }) => {
                    if side_a[i] == want_a {
                        eqs.push(Equation::Anchor { f, i: local[&i], p: prm });
                    }
                }
                Placed::SplitLink { f, i, g, j, d } => {
                    if side_a[i] == want_a {
                        eqs.push(Equation::Anchor { f, i: local[&i], p: d });
                    }
                    if side_a[j] == want_a {
                        eqs.push(Equation::Anchor { f: g, i: local[&j], p: d });
                    }
                }
            }
        }
        let vars = orig.iter().map(|&i| sigma.vars[i].clone()).collect();
        (EqSystem { vars, eqs }, orig)
    };
    let mut combined: Vec<Option<Elem>> = vec![None; n_vars];
    let b_in_p = po.in_b.image();
    for (want_a, side, side_name) in [(true, &a_in_p, 'A'), (false, &b_in_p, 'B')] {
        let (sys, orig) = build_side(want_a);
        let solved = solve_system(&p, &sys, Some(side))?
            .ok_or(Error::AmalgamationFailed { side: side_name })?;
        for (li, &oi) in orig.iter().enumerate() {
            combined[oi] = Some(solved[li]);
        }
    }
    let combined: Vec<Elem> = combined.into_iter().map(|v| v.unwrap()).collect();
    assert!(
        eval_system(&p, sigma, &combined),
        "amalgamated assignment must satisfy the system in the union"
    );
    Ok(combined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::presheaf::generate;

    fn rep_z_arc() -> Arc<Presheaf> {
        Arc::new(fixtures::rep_z())
    }

    #[test]
    fn anchors_pin_the_generator_of_rep_z() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let y = cat.object_id("Y").unwrap();
        let z = cat.object_id("Z").unwrap();
        let sys = EqSystem {
            vars: vec![Var { name: "z".into(), sort: z }],
            eqs: vec![
                Equation::Anchor {
                    f: cat.arrow_id("f").unwrap(),
                    i: 0,
                    p: rep.elem(x, "f").unwrap(),
                },
                Equation::Anchor {
                    f: cat.arrow_id("g").unwrap(),
                    i: 0,
                    p: rep.elem(y, "g").unwrap(),
                },
            ],
        };
        let sol = solve_system(&rep, &sys, None).unwrap().unwrap();
        assert_eq!(sol, vec![rep.elem(z, "id_Z").unwrap()]);
    }

    #[test]
    fn empty_system_has_the_empty_solution() {
        let rep = rep_z_arc();
        assert_eq!(solve_system(&rep, &EqSystem::default(), None).unwrap(), Some(vec![]));
    }

    #[test]
    fn restriction_with_empty_sort_is_unsolvable() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let z = cat.object_id("Z").unwrap();
        let restrict = generate(&rep, &[rep.elem(x, "f").unwrap()]);
        let sys = EqSystem {
            vars: vec![Var { name: "z".into(), sort: z }],
            eqs: vec![Equation::Anchor {
                f: cat.arrow_id("f").unwrap(),
                i: 0,
                p: rep.elem(x, "f").unwrap(),
            }],
        };
        assert_eq!(solve_system(&rep, &sys, Some(&restrict)).unwrap(), None);
    }

    #[test]
    fn raw_system_round_trips_and_rejects_bad_sorts() {
        let rep = rep_z_arc();
        let raw = RawEqSystem {
            vars: vec![RawVar { name: "z".into(), sort: "Z".into() }],
            eqs: vec![RawEquation::Anchor { f: "f".into(), i: 0, p: "f".into() }],
        };
        let sys = EqSystem::from_raw(&rep, &raw).unwrap();
        assert_eq!(sys.to_raw(&rep), raw);

        let bad = RawEqSystem {
            vars: vec![RawVar { name: "z".into(), sort: "X".into() }],
            eqs: vec![RawEquation::Anchor { f: "f".into(), i: 0, p: "f".into() }],
        };
        assert!(matches!(EqSystem::from_raw(&rep, &bad), Err(Error::SortMismatch(_))));
    }

    #[test]
    fn identity_inclusion_is_pure_with_identity_retraction() {
        let rep = rep_z_arc();
        let cert = is_pure(&Hom::identity(&rep)).unwrap();
        match cert {
            PurityCertificate::Pure { retraction } => {
                assert_eq!(retraction, Hom::identity(&rep));
            }
            _ => panic!("identities are pure"),
        }
    }

    #[test]
    fn generated_f_in_rep_z_fails_purity_by_sort_emptiness() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let y = cat.object_id("Y").unwrap();
        let incl = generate(&rep, &[rep.elem(x, "f").unwrap()]).inclusion_hom();
        match is_pure(&incl).unwrap() {
            PurityCertificate::NotPure { falsifier, solution_in_l } => {
                // First sort that is empty in K but inhabited in L is Y.
                assert_eq!(falsifier.vars.len(), 1);
                assert_eq!(falsifier.vars[0].sort, y);
                assert!(falsifier.eqs.is_empty());
                assert_eq!(solution_in_l, vec![rep.elem(y, "g").unwrap()]);
                // Re-verify both halves of the certificate.
                assert!(eval_system(&rep, &falsifier, &solution_in_l));
                let k_img = incl.image();
                assert_eq!(solve_system(&rep, &falsifier, Some(&k_img)).unwrap(), None);
            }
            _ => panic!("a sort empties out, the inclusion cannot be pure"),
        }
        assert!(is_split(&incl).unwrap().is_none());
    }

    #[test]
    fn fixed_point_inside_two_fixed_points_is_pure_over_c2() {
        let cat = fixtures::c2_cat_arc();
        let star = cat.object_id("*").unwrap();
        let l = Arc::new(
            Presheaf::build(&cat, &[("*", &["p", "q"])], &[("s", &[("p", "p"), ("q", "q")])])
                .unwrap(),
        );
        let incl = generate(&l, &[l.elem(star, "p").unwrap()]).inclusion_hom();
        match is_pure(&incl).unwrap() {
            PurityCertificate::Pure { retraction } => {
                let q = l.elem(star, "q").unwrap();
                let k = incl.source();
                assert_eq!(retraction.apply(q), k.elem(star, "p").unwrap());
            }
            _ => panic!("the extra fixed point retracts freely"),
        }
    }

    #[test]
    fn span_inclusion_with_inhabited_apex_splits_via_collapse() {
        let cat = fixtures::span_cat_arc();
        let l = Arc::new(
            Presheaf::build(
                &cat,
                &[("X", &["x0", "x1"]), ("Y", &["y0"]), ("Z", &["z0"])],
                &[("f", &[("z0", "x0")]), ("g", &[("z0", "y0")])],
            )
            .unwrap(),
        );
        let z = cat.object_id("Z").unwrap();
        let incl = generate(&l, &[l.elem(z, "z0").unwrap()]).inclusion_hom();
        let r = is_split(&incl).unwrap().expect("collapse retraction exists");
        let x = cat.object_id("X").unwrap();
        let x1 = l.elem(x, "x1").unwrap();
        assert_eq!(incl.source().elem_name(r.apply(x1)), "x0");
        assert!(is_pure(&incl).unwrap().is_pure());
    }

    #[test]
    fn three_chains_square_is_pure_effective() {
        let sq = fixtures::three_chains_square();
        let decision = is_pure_effective(&sq).unwrap();
        assert!(decision.holds());
    }

    #[test]
    fn merged_chains_square_is_pure_effective() {
        let sq = fixtures::merged_chains_square();
        assert!(is_pure_effective(&sq).unwrap().holds());
    }

    #[test]
    fn fixed_point_glued_square_has_non_mono_induced_map() {
        // L is a free orbit plus a fixed point p; gluing two copies of L
        // over just {p} folds both copies onto L, which cannot be
        // injective.
        let cat = fixtures::c2_cat_arc();
        let star = cat.object_id("*").unwrap();
        let l = Arc::new(
            Presheaf::build(
                &cat,
                &[("*", &["e", "p", "s"])],
                &[("s", &[("e", "s"), ("s", "e"), ("p", "p")])],
            )
            .unwrap(),
        );
        let k = generate(&l, &[l.elem(star, "p").unwrap()]);
        let whole = crate::presheaf::SubPresheaf::whole(&l);
        let sq = crate::limits::sub_square(&k, &whole, &whole).unwrap();
        match is_pure_effective(&sq).unwrap() {
            PureEffectiveDecision::InducedNotMono { induced } => {
                assert_eq!(induced.source().size(), 5);
            }
            other => panic!("expected a non-mono induced map, got {other:?}"),
        }
    }

    #[test]
    fn square_with_impure_leg_is_rejected() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let k = generate(&rep, &[rep.elem(x, "f").unwrap()]);
        let whole = crate::presheaf::SubPresheaf::whole(&rep);
        let sq = crate::limits::sub_square(&k, &whole, &whole).unwrap();
        assert_eq!(is_pure_effective(&sq).unwrap_err(), Error::NotPureInputs("kA".into()));
    }

    #[test]
    fn amalgamation_of_the_empty_system_is_empty() {
        let sq = fixtures::three_chains_square();
        assert_eq!(amalgamate_solution(&sq, &EqSystem::default(), &[]).unwrap(), vec![]);
    }

    #[test]
    fn amalgamation_solves_a_side_anchor_inside_that_side() {
        let sq = fixtures::three_chains_square();
        let po = pushout_monos(&sq.ka, &sq.kb).unwrap();
        let p = po.p.clone();
        let l = sq.l.clone();
        let cat = p.cat().clone();
        let zero = cat.object_id("0").unwrap();
        let one = cat.object_id("1").unwrap();
        let sigma = EqSystem {
            vars: vec![Var { name: "x".into(), sort: zero }],
            eqs: vec![Equation::Anchor {
                f: cat.arrow_id("0->1").unwrap(),
                i: 0,
                p: p.elem(one, "A/q1").unwrap(),
            }],
        };
        let sol = vec![l.elem(zero, "q0").unwrap()];
        let out = amalgamate_solution(&sq, &sigma, &sol).unwrap();
        assert_eq!(out, vec![p.elem(zero, "A/q0").unwrap()]);
        assert!(eval_system(&p, &sigma, &out));
        // Direct solving over the whole union agrees on satisfiability.
        assert!(solve_system(&p, &sigma, None).unwrap().is_some());
    }

    #[test]
    fn amalgamation_splits_a_cross_link_through_the_base() {
        let sq = fixtures::merged_chains_square();
        let po = pushout_monos(&sq.ka, &sq.kb).unwrap();
        let p = po.p.clone();
        let l = sq.l.clone();
        let cat = p.cat().clone();
        let zero = cat.object_id("0").unwrap();
        let f = cat.arrow_id("0->2").unwrap();
        let sigma = EqSystem {
            vars: vec![Var { name: "x".into(), sort: zero }, Var { name: "y".into(), sort: zero }],
            eqs: vec![Equation::Link { f, i: 0, g: f, j: 1 }],
        };
        // In L the two variables sit on opposite sides; the linked value
        // is the shared top of the chains, which lies in K.  Splitting
        // the link into anchors onto that base element leaves each
        // variable free to land in either side.
        let sol = vec![l.elem(zero, "q0").unwrap(), l.elem(zero, "r0").unwrap()];
        let out = amalgamate_solution(&sq, &sigma, &sol).unwrap();
        assert!(eval_system(&p, &sigma, &out));
        let two = cat.object_id("2").unwrap();
        assert_eq!(p.act(f, out[0]), p.elem(two, "K/p2").unwrap());
        let a_side = po.in_a.image();
        let b_side = po.in_b.image();
        assert!(out.iter().all(|&e| a_side.contains(e) || b_side.contains(e)));
    }

    #[test]
    fn amalgamation_rejects_wrong_solutions_and_bad_squares() {
        let sq = fixtures::three_chains_square();
        let po = pushout_monos(&sq.ka, &sq.kb).unwrap();
        let p = po.p.clone();
        let l = sq.l.clone();
        let cat = p.cat().clone();
        let zero = cat.object_id("0").unwrap();
        let one = cat.object_id("1").unwrap();
        let sigma = EqSystem {
            vars: vec![Var { name: "x".into(), sort: zero }],
            eqs: vec![Equation::Anchor {
                f: cat.arrow_id("0->1").unwrap(),
                i: 0,
                p: p.elem(one, "A/q1").unwrap(),
            }],
        };
        // r0 does not map onto q1.
        let wrong = vec![l.elem(zero, "r0").unwrap()];
        assert!(matches!(amalgamate_solution(&sq, &sigma, &wrong), Err(Error::NotSolvableInL(_))));

        // A square that is not a pullback is rejected up front.
        let whole = crate::presheaf::SubPresheaf::whole(&l);
        let zero_elem = l.elem(zero, "p0").unwrap();
        let k_small = generate(&l, &[zero_elem]);
        let not_pb = crate::limits::sub_square(&k_small, &whole, &whole).unwrap();
        assert!(matches!(
            amalgamate_solution(&not_pb, &EqSystem::default(), &[]),
            Err(Error::NotPullback(_))
        ));
    }

    #[test]
    fn canonical_system_matches_its_own_tuple() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let k = generate(&rep, &[rep.elem(x, "f").unwrap()]);
        let (sys, tuple) = canonical_system(&k);
        assert_eq!(sys.vars.len(), 2);
        assert!(eval_system(&rep, &sys, &tuple));
        // id_Z generates f: the anchor f . id_Z = f with f inside K.
        assert!(sys.eqs.iter().any(|eq| matches!(eq, Equation::Anchor { .. })));
    }
}
