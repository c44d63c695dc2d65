//! The order-property chain construction at finite depth, its lemma
//! checks, and pattern search over finite presheaves.
//!
//! Starting from a seed (K, a, b, c, f, g) with a = f.c, b = g.c and no
//! arrow connecting a to b in either direction, the construction glues
//! fresh copies of K along generated subpresheaves, one pushout per index
//! (n, m) with m <= n.  Truncated at depth N it produces the stages with
//! n < N; nonexistence claims checked in the final stage are sound for
//! the untruncated colimit, existence claims are asserted only for
//! indices defined at this depth.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{ArrowId, ObjId};
use crate::limits::pushout_monos;
use crate::presheaf::{
    generate, intersect, validate_presheaf, Elem, Hom, Presheaf, RawPresheaf, SubPresheaf,
};

#[derive(Clone, Debug)]
pub struct ChainSeed {
    pub k: Arc<Presheaf>,
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub f: ArrowId,
    pub g: ArrowId,
}

#[derive(Clone, Debug)]
pub struct ChainStage {
    pub index: (usize, usize),
    pub presheaf: Arc<Presheaf>,
    /// Mono from the previous stage; absent at the base stage.
    pub link: Option<Hom>,
    /// Embedding of the seed presheaf picking out this stage's copy of c.
    pub v: Hom,
}

/// A finite-depth run of the chain construction.  Element names persist
/// along links, so marked elements are tracked by (sort, name) and can be
/// resolved in any stage at or after their first appearance.
#[derive(Clone, Debug)]
pub struct ChainTrace {
    pub seed: ChainSeed,
    pub depth: usize,
    pub stages: Vec<ChainStage>,
    pub a_marks: Vec<(ObjId, String)>,
    pub b_marks: Vec<(ObjId, String)>,
    pub c_marks: BTreeMap<(usize, usize), (ObjId, String)>,
}

impl ChainTrace {
    pub fn final_stage(&self) -> &Arc<Presheaf> {
        &self.stages.last().expect("a trace has at least one stage").presheaf
    }
    pub fn stage_sizes(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.presheaf.size()).collect()
    }
    pub fn a_elem(&self, n: usize) -> Elem {
        let (sort, name) = &self.a_marks[n];
        self.final_stage().elem(*sort, name).expect("marked element persists")
    }
    pub fn b_elem(&self, m: usize) -> Elem {
        let (sort, name) = &self.b_marks[m];
        self.final_stage().elem(*sort, name).expect("marked element persists")
    }
    pub fn c_elem(&self, n: usize, m: usize) -> Elem {
        let (sort, name) = &self.c_marks[&(n, m)];
        self.final_stage().elem(*sort, name).expect("marked element persists")
    }
}

/// The lexicographic index set {(n, m) : m <= n < depth}.
pub fn chain_indices(depth: usize) -> Vec<(usize, usize)> {
    (0..depth).flat_map(|n| (0..=n).map(move |m| (n, m))).collect()
}

fn check_seed(k: &Presheaf, a: Elem, b: Elem, c: Elem, f: ArrowId, g: ArrowId) -> Result<()> {
    let cat = k.cat();
    if cat.dom(f) != c.sort || cat.dom(g) != c.sort {
        return Err(Error::SeedConditionViolated("f and g must accept the sort of c".into()));
    }
    if k.act(f, c) != a {
        return Err(Error::SeedConditionViolated("a differs from f . c".into()));
    }
    if k.act(g, c) != b {
        return Err(Error::SeedConditionViolated("b differs from g . c".into()));
    }
    for h in cat.arrows_from(a.sort) {
        if cat.cod(h) == b.sort && k.act(h, a) == b {
            return Err(Error::SeedConditionViolated(format!(
                "arrow {} sends a to b",
                cat.arrow_name(h)
            )));
        }
    }
    for h in cat.arrows_from(b.sort) {
        if cat.cod(h) == a.sort && k.act(h, b) == a {
            return Err(Error::SeedConditionViolated(format!(
                "arrow {} sends b to a",
                cat.arrow_name(h)
            )));
        }
    }
    Ok(())
}

/// Builds the gluing map on the subpresheaf generated by `gens`, sending
/// each generator to its target in `prev` and every h . gen accordingly.
fn gluing_hom(
    k: &Arc<Presheaf>,
    gens: &[Elem],
    targets: &[Elem],
    prev: &Arc<Presheaf>,
) -> Result<(SubPresheaf, Hom, Hom)> {
    let cat = k.cat().clone();
    let sub = generate(k, gens);
    let incl = sub.inclusion_hom();
    let mut images: HashMap<Elem, Elem> = HashMap::new();
    for (&gen, &tgt) in gens.iter().zip(targets) {
        for h in cat.arrows_from(gen.sort) {
            let x = k.act(h, gen);
            let y = prev.act(h, tgt);
            if let Some(&old) = images.get(&x) {
                if old != y {
                    return Err(Error::GluingNotMono(format!(
                        "conflicting images for {}",
                        k.qualified(x)
                    )));
                }
            }
            images.insert(x, y);
        }
    }
    let u = Hom::from_fn(incl.source(), prev, |e| images[&incl.apply(e)])
        .map_err(|e| Error::GluingNotMono(format!("gluing map is not natural: {e}")))?;
    if !u.is_mono() {
        return Err(Error::GluingNotMono("gluing map identifies distinct elements".into()));
    }
    Ok((sub, incl, u))
}

/// Renames a pushout of prev <- S -> K so that elements coming from the
/// previous stage keep their names and fresh elements from K get a stage
/// suffix.  Returns the stage with its link and embedding.
fn renamed_stage(
    prev: &Arc<Presheaf>,
    k: &Arc<Presheaf>,
    incl: &Hom,
    u: &Hom,
    n: usize,
    m: usize,
) -> Result<(Arc<Presheaf>, Hom, Hom)> {
    let po = pushout_monos(u, incl)?;
    let p = &po.p;
    let cat = p.cat().clone();
    let mut names: HashMap<Elem, String> = HashMap::new();
    for x in prev.elements() {
        names.insert(po.in_a.apply(x), prev.elem_name(x).to_string());
    }
    for y in k.elements() {
        names.entry(po.in_b.apply(y)).or_insert_with(|| format!("{}@{n},{m}", k.elem_name(y)));
    }
    let raw = RawPresheaf {
        category: String::new(),
        carriers: cat
            .objects()
            .map(|o| {
                (
                    cat.object_name(o).to_string(),
                    p.elements_of(o).map(|e| names[&e].clone()).collect(),
                )
            })
            .collect(),
        actions: cat
            .arrows()
            .filter(|&ar| !cat.is_identity(ar))
            .map(|ar| {
                (
                    cat.arrow_name(ar).to_string(),
                    p.elements_of(cat.dom(ar))
                        .map(|e| (names[&e].clone(), names[&p.act(ar, e)].clone()))
                        .collect(),
                )
            })
            .collect(),
    };
    let stage = Arc::new(validate_presheaf(&cat, &raw)?);
    let link = Hom::from_fn(prev, &stage, |x| {
        stage.elem(x.sort, prev.elem_name(x)).expect("previous-stage names persist")
    })
    .expect("renaming preserves the action");
    let v = Hom::from_fn(k, &stage, |y| {
        stage
            .elem(y.sort, &names[&po.in_b.apply(y)])
            .expect("every seed element lands in the stage")
    })
    .expect("the pushout coprojection is natural");
    Ok((stage, link, v))
}

/// Runs the construction to the given depth.  Stage (0,0) is the seed
/// itself; stage (n,0) glues a fresh copy of K along <b> onto b_0, stage
/// (n,m) with 0 < m < n along <a,b> onto (a_n, b_m), and stage (n,n)
/// along <a> onto a_n.
pub fn build_chain(
    k: &Arc<Presheaf>,
    a: Elem,
    b: Elem,
    c: Elem,
    f: ArrowId,
    g: ArrowId,
    depth: usize,
) -> Result<ChainTrace> {
    if depth == 0 {
        return Err(Error::BadParameters("depth must be at least 1".into()));
    }
    check_seed(k, a, b, c, f, g)?;
    let seed = ChainSeed { k: k.clone(), a, b, c, f, g };

    let mut stages: Vec<ChainStage> =
        vec![ChainStage { index: (0, 0), presheaf: k.clone(), link: None, v: Hom::identity(k) }];
    let mut a_marks = vec![(a.sort, k.elem_name(a).to_string())];
    let mut b_marks = vec![(b.sort, k.elem_name(b).to_string())];
    let mut c_marks = BTreeMap::new();
    c_marks.insert((0, 0), (c.sort, k.elem_name(c).to_string()));

    for &(n, m) in chain_indices(depth).iter().skip(1) {
        let prev = stages.last().unwrap().presheaf.clone();
        let resolve = |marks: &[(ObjId, String)], i: usize| -> Elem {
            let (sort, name) = &marks[i];
            prev.elem(*sort, name).expect("marks resolve in later stages")
        };
        let (gens, targets): (Vec<Elem>, Vec<Elem>) = if m == 0 {
            (vec![b], vec![resolve(&b_marks, 0)])
        } else if m < n {
            (vec![a, b], vec![resolve(&a_marks, n), resolve(&b_marks, m)])
        } else {
            (vec![a], vec![resolve(&a_marks, n)])
        };
        let (sub, incl, u) = gluing_hom(k, &gens, &targets, &prev)?;
        let (stage, link, v) = renamed_stage(&prev, k, &incl, &u, n, m)?;
        assert_eq!(
            stage.size(),
            prev.size() + k.size() - sub.size(),
            "stage cardinality must follow the gluing formula"
        );
        assert!(link.is_mono() && v.is_mono(), "chain maps are monos");
        let vc = v.apply(c);
        c_marks.insert((n, m), (vc.sort, stage.elem_name(vc).to_string()));
        if m == 0 {
            let va = v.apply(a);
            assert_eq!(a_marks.len(), n, "a_n first appears at stage (n, 0)");
            a_marks.push((va.sort, stage.elem_name(va).to_string()));
        }
        if m == n {
            let vb = v.apply(b);
            assert_eq!(b_marks.len(), n, "b_n first appears at stage (n, n)");
            b_marks.push((vb.sort, stage.elem_name(vb).to_string()));
        }
        stages.push(ChainStage { index: (n, m), presheaf: stage, link: Some(link), v });
    }

    Ok(ChainTrace { seed, depth, stages, a_marks, b_marks, c_marks })
}

/// Outcome at one (n, m) cell of the order-pattern check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairOutcome {
    /// m <= n and the recorded c_{n,m} satisfies f.c = a_n, g.c = b_m.
    Witnessed { c: Elem },
    /// m <= n but the recorded witness fails its equations.
    WitnessBroken { c: Elem },
    /// n < m and no element generates both a_n and b_m.
    NoConnection,
    /// n < m yet some element generates both; a lemma violation.
    Connected { d: Elem },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderPatternReport {
    pub depth: usize,
    /// matrix[n][m] over the full depth x depth rectangle.
    pub matrix: Vec<Vec<PairOutcome>>,
    pub violations: Vec<(usize, usize)>,
}

impl OrderPatternReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// True when x lies in the subpresheaf generated by d, that is some
/// arrow h has h . d = x.
fn generates(p: &Presheaf, d: Elem, x: Elem) -> bool {
    p.cat().arrows_from(d.sort).any(|h| p.cat().cod(h) == x.sort && p.act(h, d) == x)
}

/// Verifies the order pattern of a trace in its final stage: recorded
/// witnesses for m <= n, and for n < m the absence, by exhaustive scan,
/// of any element generating both a_n and b_m.
pub fn check_order_pattern(trace: &ChainTrace) -> OrderPatternReport {
    let fin = trace.final_stage();
    let (f, g) = (trace.seed.f, trace.seed.g);
    let mut matrix = Vec::new();
    let mut violations = Vec::new();
    for n in 0..trace.depth {
        let mut row = Vec::new();
        for m in 0..trace.depth {
            let a_n = trace.a_elem(n);
            let b_m = trace.b_elem(m);
            let outcome = if m <= n {
                let c = trace.c_elem(n, m);
                if fin.act(f, c) == a_n && fin.act(g, c) == b_m {
                    PairOutcome::Witnessed { c }
                } else {
                    PairOutcome::WitnessBroken { c }
                }
            } else {
                match fin.elements().find(|&d| generates(fin, d, a_n) && generates(fin, d, b_m)) {
                    None => PairOutcome::NoConnection,
                    Some(d) => PairOutcome::Connected { d },
                }
            };
            if matches!(outcome, PairOutcome::WitnessBroken { .. } | PairOutcome::Connected { .. })
            {
                violations.push((n, m));
            }
            row.push(outcome);
        }
        matrix.push(row);
    }
    OrderPatternReport { depth: trace.depth, matrix, violations }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HReport {
    /// Elements of H = <a_0> n <b_0> in the final stage.
    pub h: Vec<Elem>,
    /// (i): H = <a_n> n <b_m> for all defined n, m.
    pub intersections_match: bool,
    /// (ii): H = <a_n> n <a_n'> = <b_n> n <b_n'> for n != n'.
    pub pairwise_match: bool,
    /// (iii): no a_n, b_m or c_{n,m} lies in H.
    pub marks_outside: bool,
    pub failures: Vec<String>,
}

impl HReport {
    pub fn ok(&self) -> bool {
        self.intersections_match && self.pairwise_match && self.marks_outside
    }
}

/// Computes H = <a_0> n <b_0> in the final stage and verifies its three
/// stability clauses across all marked elements.
pub fn check_h_properties(trace: &ChainTrace) -> HReport {
    let fin = trace.final_stage();
    let gen1 = |e: Elem| generate(fin, &[e]);
    let h = intersect(&gen1(trace.a_elem(0)), &gen1(trace.b_elem(0)))
        .expect("both generated inside the final stage");
    let mut failures = Vec::new();

    let mut intersections_match = true;
    for n in 0..trace.depth {
        for m in 0..trace.depth {
            let meet = intersect(&gen1(trace.a_elem(n)), &gen1(trace.b_elem(m))).unwrap();
            if meet != h {
                intersections_match = false;
                failures.push(format!("<a_{n}> n <b_{m}> differs from H"));
            }
        }
    }

    let mut pairwise_match = true;
    for n in 0..trace.depth {
        for n2 in 0..trace.depth {
            if n == n2 {
                continue;
            }
            if intersect(&gen1(trace.a_elem(n)), &gen1(trace.a_elem(n2))).unwrap() != h {
                pairwise_match = false;
                failures.push(format!("<a_{n}> n <a_{n2}> differs from H"));
            }
            if intersect(&gen1(trace.b_elem(n)), &gen1(trace.b_elem(n2))).unwrap() != h {
                pairwise_match = false;
                failures.push(format!("<b_{n}> n <b_{n2}> differs from H"));
            }
        }
    }

    let mut marks_outside = true;
    for n in 0..trace.depth {
        if h.contains(trace.a_elem(n)) {
            marks_outside = false;
            failures.push(format!("a_{n} lies in H"));
        }
        if h.contains(trace.b_elem(n)) {
            marks_outside = false;
            failures.push(format!("b_{n} lies in H"));
        }
        for m in 0..=n {
            if h.contains(trace.c_elem(n, m)) {
                marks_outside = false;
                failures.push(format!("c_{n},{m} lies in H"));
            }
        }
    }

    HReport {
        h: h.elements().collect(),
        intersections_match,
        pairwise_match,
        marks_outside,
        failures,
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PatternShape {
    /// A witness for every (row, col) pair.
    Bipartite { rows: usize, cols: usize },
    /// A witness exactly when row index <= col index.
    Order { len: usize },
}

/// Rows, columns and the witnessing elements of a found pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternWitness {
    pub f: ArrowId,
    pub g: ArrowId,
    pub rows: Vec<Elem>,
    pub cols: Vec<Elem>,
    pub witnesses: BTreeMap<(usize, usize), Elem>,
}

impl PatternWitness {
    /// Re-checks the witness against the presheaf: distinctness, every
    /// required witness equation, and for the order shape the absence of
    /// witnesses below the diagonal by exhaustive scan.
    pub fn verify(&self, p: &Presheaf, shape: PatternShape) -> bool {
        let distinct =
            |v: &[Elem]| v.iter().collect::<std::collections::BTreeSet<_>>().len() == v.len();
        if !distinct(&self.rows) || !distinct(&self.cols) {
            return false;
        }
        let witnessed = |i: usize, j: usize| {
            self.witnesses.get(&(i, j)).is_some_and(|&c| {
                p.act(self.f, c) == self.rows[i] && p.act(self.g, c) == self.cols[j]
            })
        };
        let dom = p.cat().dom(self.f);
        let none_for = |i: usize, j: usize| {
            !p.elements_of(dom)
                .any(|c| p.act(self.f, c) == self.rows[i] && p.act(self.g, c) == self.cols[j])
        };
        match shape {
            PatternShape::Bipartite { rows, cols } => {
                self.rows.len() == rows
                    && self.cols.len() == cols
                    && (0..rows).all(|i| (0..cols).all(|j| witnessed(i, j)))
            }
            PatternShape::Order { len } => {
                self.rows.len() == len
                    && self.cols.len() == len
                    && (0..len).all(|i| {
                        (0..len).all(|j| if i <= j { witnessed(i, j) } else { none_for(i, j) })
                    })
            }
        }
    }
}

/// Serialized pattern witness with element names.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawPatternWitness {
    pub f: String,
    pub g: String,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    /// Keys are "i,j" pairs.
    pub witnesses: BTreeMap<String, String>,
}

impl PatternWitness {
    pub fn to_raw(&self, p: &Presheaf) -> RawPatternWitness {
        let cat = p.cat();
        RawPatternWitness {
            f: cat.arrow_name(self.f).to_string(),
            g: cat.arrow_name(self.g).to_string(),
            rows: self.rows.iter().map(|&e| p.qualified(e)).collect(),
            cols: self.cols.iter().map(|&e| p.qualified(e)).collect(),
            witnesses: self
                .witnesses
                .iter()
                .map(|(&(i, j), &c)| (format!("{i},{j}"), p.qualified(c)))
                .collect(),
        }
    }
}

/// One cell of a serialized order-pattern matrix.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawPairOutcome {
    /// "witnessed", "witness-broken", "no-connection" or "connected".
    pub status: String,
    pub element: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawOrderPatternReport {
    pub depth: usize,
    pub matrix: Vec<Vec<RawPairOutcome>>,
    pub violations: Vec<[usize; 2]>,
    pub ok: bool,
}

impl OrderPatternReport {
    pub fn to_raw(&self, p: &Presheaf) -> RawOrderPatternReport {
        let cell = |o: &PairOutcome| match *o {
            PairOutcome::Witnessed { c } => {
                RawPairOutcome { status: "witnessed".into(), element: Some(p.qualified(c)) }
            }
            PairOutcome::WitnessBroken { c } => {
                RawPairOutcome { status: "witness-broken".into(), element: Some(p.qualified(c)) }
            }
            PairOutcome::NoConnection => {
                RawPairOutcome { status: "no-connection".into(), element: None }
            }
            PairOutcome::Connected { d } => {
                RawPairOutcome { status: "connected".into(), element: Some(p.qualified(d)) }
            }
        };
        RawOrderPatternReport {
            depth: self.depth,
            matrix: self.matrix.iter().map(|row| row.iter().map(cell).collect()).collect(),
            violations: self.violations.iter().map(|&(n, m)| [n, m]).collect(),
            ok: self.ok(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawHReport {
    pub h: Vec<String>,
    pub intersections_match: bool,
    pub pairwise_match: bool,
    pub marks_outside: bool,
    pub failures: Vec<String>,
    pub ok: bool,
}

impl HReport {
    pub fn to_raw(&self, p: &Presheaf) -> RawHReport {
        RawHReport {
            h: self.h.iter().map(|&e| p.qualified(e)).collect(),
            intersections_match: self.intersections_match,
            pairwise_match: self.pairwise_match,
            marks_outside: self.marks_outside,
            failures: self.failures.clone(),
            ok: self.ok(),
        }
    }
}

/// Searches `p` for a witness pattern over the span (f, g).  Backtracks
/// over row tuples in canonical element order, then assigns columns; the
/// first find in that order is returned.  Witness absence for the order
/// shape is decided by exhaustive scan of the common domain's carrier.
pub fn find_pattern(
    p: &Arc<Presheaf>,
    f: ArrowId,
    g: ArrowId,
    shape: PatternShape,
) -> Result<Option<PatternWitness>> {
    let cat = p.cat().clone();
    if cat.dom(f) != cat.dom(g) {
        return Err(Error::BadSpan {
            f: cat.arrow_name(f).to_string(),
            g: cat.arrow_name(g).to_string(),
        });
    }
    let (n_rows, n_cols) = match shape {
        PatternShape::Bipartite { rows, cols } => (rows, cols),
        PatternShape::Order { len } => (len, len),
    };
    if n_rows == 0 || n_cols == 0 {
        return Err(Error::BadParameters("pattern thresholds must be at least 1".into()));
    }

    let row_pool: Vec<Elem> = p.elements_of(cat.cod(f)).collect();
    let col_pool: Vec<Elem> = p.elements_of(cat.cod(g)).collect();
    if row_pool.len() < n_rows || col_pool.len() < n_cols {
        return Ok(None);
    }
    // witness_for[(x, y)] is the first c with f.c = x and g.c = y.
    let mut witness_for: HashMap<(Elem, Elem), Elem> = HashMap::new();
    for c in p.elements_of(cat.dom(f)) {
        witness_for.entry((p.act(f, c), p.act(g, c))).or_insert(c);
    }

    // Columns together with the witness for each required cell.
    type ColsFound = (Vec<Elem>, BTreeMap<(usize, usize), Elem>);
    fn choose_rows(
        pool: &[Elem],
        chosen: &mut Vec<Elem>,
        want: usize,
        try_cols: &mut impl FnMut(&[Elem]) -> Option<ColsFound>,
    ) -> Option<(Vec<Elem>, ColsFound)> {
        if chosen.len() == want {
            return try_cols(chosen).map(|found| (chosen.clone(), found));
        }
        for &x in pool {
            if chosen.contains(&x) {
                continue;
            }
            chosen.push(x);
            if let Some(found) = choose_rows(pool, chosen, want, try_cols) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }

    let mut try_cols = |rows: &[Elem]| {
        // Column constraints depend only on the fixed rows, so assign
        // columns left to right with backtracking over distinctness.
        let admissible = |j: usize, y: Elem| match shape {
            PatternShape::Bipartite { .. } => {
                (0..n_rows).all(|i| witness_for.contains_key(&(rows[i], y)))
            }
            PatternShape::Order { .. } => (0..n_rows).all(|i| {
                let has = witness_for.contains_key(&(rows[i], y));
                if i <= j {
                    has
                } else {
                    !has
                }
            }),
        };
        fn assign(
            j: usize,
            n_cols: usize,
            col_pool: &[Elem],
            cols: &mut Vec<Elem>,
            admissible: &impl Fn(usize, Elem) -> bool,
        ) -> bool {
            if j == n_cols {
                return true;
            }
            for &y in col_pool {
                if cols.contains(&y) || !admissible(j, y) {
                    continue;
                }
                cols.push(y);
                if assign(j + 1, n_cols, col_pool, cols, admissible) {
                    return true;
                }
                cols.pop();
            }
            false
        }
        let mut cols = Vec::new();
        if !assign(0, n_cols, &col_pool, &mut cols, &admissible) {
            return None;
        }
        let mut ws = BTreeMap::new();
        for i in 0..n_rows {
            for j in 0..n_cols {
                let needed = match shape {
                    PatternShape::Bipartite { .. } => true,
                    PatternShape::Order { .. } => i <= j,
                };
                if needed {
                    ws.insert((i, j), witness_for[&(rows[i], cols[j])]);
                }
            }
        }
        Some((cols, ws))
    };

    Ok(choose_rows(&row_pool, &mut Vec::new(), n_rows, &mut try_cols)
        .map(|(rows, (cols, witnesses))| PatternWitness { f, g, rows, cols, witnesses }))
}
