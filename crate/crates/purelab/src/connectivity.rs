//! Connectivity of a presheaf outside a base subpresheaf.
//!
//! Two elements outside K are joined by an edge when one is reached from
//! the other by a single arrow application; connectivity is the transitive
//! closure, possibly crossing sorts.  Self-loops carry no information and
//! are dropped.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::ArrowId;
use crate::presheaf::{Elem, SubPresheaf};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub base: SubPresheaf,
    /// Disjoint classes covering the complement of the base, each sorted in
    /// canonical element order and listed by their smallest element.
    pub components: Vec<Vec<Elem>>,
    /// Labeled single-step edges (x, f, f . x) with both endpoints outside
    /// the base and x != f . x, in canonical scan order.
    pub edges: Vec<(Elem, ArrowId, Elem)>,
}

/// Wire format of a report; elements are sort-qualified as `Sort:name`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RawConnectivityReport {
    pub components: Vec<Vec<String>>,
    pub edges: Vec<[String; 3]>,
}

fn edges_outside(base: &SubPresheaf) -> Vec<(Elem, ArrowId, Elem)> {
    let l = base.ambient();
    let cat = l.cat();
    let mut edges = Vec::new();
    for x in base.complement() {
        for f in cat.arrows_from(x.sort) {
            if cat.is_identity(f) {
                continue;
            }
            let y = l.act(f, x);
            if y != x && !base.contains(y) {
                edges.push((x, f, y));
            }
        }
    }
    edges
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }
    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.parent[ri.max(rj)] = ri.min(rj);
        }
    }
}

/// Partitions the complement of the base into connectivity classes.
pub fn components_outside(base: &SubPresheaf) -> ConnectivityReport {
    let outside: Vec<Elem> = base.complement().collect();
    let index: HashMap<Elem, usize> = outside.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let edges = edges_outside(base);
    let mut uf = UnionFind::new(outside.len());
    for &(x, _, y) in &edges {
        uf.union(index[&x], index[&y]);
    }
    let mut classes: BTreeMap<usize, Vec<Elem>> = BTreeMap::new();
    for (i, &e) in outside.iter().enumerate() {
        classes.entry(uf.find(i)).or_default().push(e);
    }
    // Keys are minimal member indices and `outside` is canonically ordered,
    // so classes come out sorted by smallest element.
    ConnectivityReport { base: base.clone(), components: classes.into_values().collect(), edges }
}

impl ConnectivityReport {
    pub fn to_raw(&self) -> RawConnectivityReport {
        let l = self.base.ambient();
        RawConnectivityReport {
            components: self
                .components
                .iter()
                .map(|c| c.iter().map(|&e| l.qualified(e)).collect())
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(x, f, y)| {
                    [l.qualified(x), l.cat().arrow_name(f).to_string(), l.qualified(y)]
                })
                .collect(),
        }
    }
}

/// Outcome of a path query between two elements outside the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathDecision {
    NotConnected,
    /// A shortest path a = c_0, ..., c_n = b in the edge graph.
    Connected(Vec<Elem>),
}

impl PathDecision {
    pub fn is_connected(&self) -> bool {
        matches!(self, PathDecision::Connected(_))
    }
}

/// Breadth-first shortest path between `a` and `b` outside the base.
pub fn connected_outside(base: &SubPresheaf, a: Elem, b: Elem) -> Result<PathDecision> {
    let l = base.ambient();
    for e in [a, b] {
        if base.contains(e) {
            return Err(Error::ElementInBase(l.qualified(e)));
        }
    }
    if a == b {
        return Ok(PathDecision::Connected(vec![a]));
    }
    let mut adjacency: HashMap<Elem, Vec<Elem>> = HashMap::new();
    for (x, _, y) in edges_outside(base) {
        let xs = adjacency.entry(x).or_default();
        if !xs.contains(&y) {
            xs.push(y);
        }
        let ys = adjacency.entry(y).or_default();
        if !ys.contains(&x) {
            ys.push(x);
        }
    }
    let mut predecessor: HashMap<Elem, Elem> = HashMap::new();
    let mut queue = VecDeque::from([a]);
    predecessor.insert(a, a);
    while let Some(x) = queue.pop_front() {
        for &y in adjacency.get(&x).into_iter().flatten() {
            if let std::collections::hash_map::Entry::Vacant(slot) = predecessor.entry(y) {
                slot.insert(x);
                if y == b {
                    let mut path = vec![b];
                    let mut cur = b;
                    while cur != a {
                        cur = predecessor[&cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Ok(PathDecision::Connected(path));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(PathDecision::NotConnected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::fixtures;
    use crate::limits::pushout_monos;
    use crate::presheaf::{generate, Hom, Presheaf};

    fn rep_z_arc() -> Arc<Presheaf> {
        Arc::new(fixtures::rep_z())
    }

    #[test]
    fn rep_z_over_empty_base_is_one_class() {
        let rep = rep_z_arc();
        let report = components_outside(&SubPresheaf::empty(&rep));
        let raw = report.to_raw();
        assert_eq!(raw.components, vec![vec!["X:f", "Y:g", "Z:id_Z"]]);
        assert_eq!(
            raw.edges,
            vec![
                ["Z:id_Z".to_string(), "f".into(), "X:f".into()],
                ["Z:id_Z".to_string(), "g".into(), "Y:g".into()],
            ]
        );
    }

    #[test]
    fn cutting_generated_f_keeps_g_and_generator_together() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let base = generate(&rep, &[rep.elem(x, "f").unwrap()]);
        let raw = components_outside(&base).to_raw();
        assert_eq!(raw.components, vec![vec!["Y:g", "Z:id_Z"]]);
        assert_eq!(raw.edges, vec![["Z:id_Z".to_string(), "g".into(), "Y:g".into()]]);
    }

    #[test]
    fn full_base_gives_empty_partition() {
        let rep = rep_z_arc();
        let report = components_outside(&SubPresheaf::whole(&rep));
        assert!(report.components.is_empty());
        assert!(report.edges.is_empty());
    }

    #[test]
    fn shortest_path_between_f_and_g_goes_through_the_generator() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let y = cat.object_id("Y").unwrap();
        let a = rep.elem(x, "f").unwrap();
        let b = rep.elem(y, "g").unwrap();
        let base = SubPresheaf::empty(&rep);
        match connected_outside(&base, a, b).unwrap() {
            PathDecision::Connected(path) => {
                let names: Vec<String> = path.iter().map(|&e| rep.qualified(e)).collect();
                assert_eq!(names, ["X:f", "Z:id_Z", "Y:g"]);
            }
            PathDecision::NotConnected => panic!("f and g are connected via id_Z"),
        }
    }

    #[test]
    fn path_from_an_element_to_itself_is_trivial() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let a = rep.elem(x, "f").unwrap();
        assert_eq!(
            connected_outside(&SubPresheaf::empty(&rep), a, a).unwrap(),
            PathDecision::Connected(vec![a])
        );
    }

    #[test]
    fn coproduct_copies_are_not_connected() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let empty = Arc::new(Presheaf::empty(&cat));
        let leg = Hom::from_fn(&empty, &rep, |_| unreachable!()).unwrap();
        let po = pushout_monos(&leg, &leg).unwrap();
        let x = cat.object_id("X").unwrap();
        let a = po.p.elem(x, "A/f").unwrap();
        let b = po.p.elem(x, "B/f").unwrap();
        let base = SubPresheaf::empty(&po.p);
        assert_eq!(connected_outside(&base, a, b).unwrap(), PathDecision::NotConnected);
        assert_eq!(components_outside(&base).components.len(), 2);
    }

    #[test]
    fn querying_an_element_of_the_base_is_rejected() {
        let rep = rep_z_arc();
        let cat = rep.cat().clone();
        let x = cat.object_id("X").unwrap();
        let y = cat.object_id("Y").unwrap();
        let base = generate(&rep, &[rep.elem(x, "f").unwrap()]);
        let err = connected_outside(&base, rep.elem(x, "f").unwrap(), rep.elem(y, "g").unwrap())
            .unwrap_err();
        assert_eq!(err, Error::ElementInBase("X:f".into()));
    }

    #[test]
    fn partition_is_stable_under_renaming() {
        // The same shape with scrambled element names must yield the same
        // partition up to the renaming.
        let cat = fixtures::chain3_cat_arc();
        let build = |n0: &str, n1: &str, n2a: &str, n2b: &str| {
            Arc::new(
                Presheaf::build(
                    &cat,
                    &[("0", &[n0]), ("1", &[n1]), ("2", &[n2a, n2b])],
                    &[("0->1", &[(n0, n1)]), ("0->2", &[(n0, n2a)]), ("1->2", &[(n1, n2a)])],
                )
                .unwrap(),
            )
        };
        let p1 = build("u", "v", "w", "iso");
        let p2 = build("zz", "a", "m", "b");
        let rename = |n: &str| match n {
            "u" => "zz",
            "v" => "a",
            "w" => "m",
            "iso" => "b",
            _ => unreachable!(),
        };
        let r1 = components_outside(&SubPresheaf::empty(&p1));
        let r2 = components_outside(&SubPresheaf::empty(&p2));
        let as_sets = |report: &ConnectivityReport, f: &dyn Fn(&str) -> String| {
            let l = report.base.ambient().clone();
            report
                .components
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|&e| format!("{}:{}", l.cat().object_name(e.sort), f(l.elem_name(e))))
                        .collect::<std::collections::BTreeSet<String>>()
                })
                .collect::<std::collections::BTreeSet<_>>()
        };
        assert_eq!(as_sets(&r1, &|n| rename(n).to_string()), as_sets(&r2, &|n| n.to_string()));
        // Two classes either way: the chain u-v-w and the isolated extra.
        assert_eq!(r1.components.len(), 2);
    }

    #[test]
    fn llp_paths_have_length_at_most_two_with_midpoint_in_both_generated_parts() {
        // Exhaustive over all bases of small presheaves on locally linear
        // categories.
        use crate::presheaf::{enumerate_subpresheaves, intersect};
        let c2 = fixtures::c2_cat_arc();
        let chain = fixtures::chain3_cat_arc();
        let mut cases: Vec<Arc<Presheaf>> = vec![
            Arc::new(crate::presheaf::representable(&c2, c2.object_id("*").unwrap())),
            Arc::new(
                Presheaf::build(
                    &c2,
                    &[("*", &["p", "q", "r", "rq"])],
                    &[("s", &[("p", "p"), ("q", "rq"), ("rq", "q"), ("r", "r")])],
                )
                .unwrap(),
            ),
        ];
        for x in ["0", "1", "2"] {
            cases.push(Arc::new(crate::presheaf::representable(
                &chain,
                chain.object_id(x).unwrap(),
            )));
        }
        for l in cases {
            for base in enumerate_subpresheaves(&l) {
                let outside: Vec<Elem> = base.complement().collect();
                for &a in &outside {
                    for &b in &outside {
                        if let PathDecision::Connected(path) =
                            connected_outside(&base, a, b).unwrap()
                        {
                            assert!(path.len() <= 3, "path longer than two steps");
                            if path.len() == 3 {
                                let mid = path[1];
                                let ga = generate(&l, &[a]);
                                let gb = generate(&l, &[b]);
                                assert!(intersect(&ga, &gb).unwrap().contains(mid));
                            }
                        }
                    }
                }
            }
        }
    }
}
