//! Hypergraphs: duals, 2-sections, line graphs, acyclicity tests and
//! join-tree witnesses.

pub mod hd;
pub mod width;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::vset::{for_each_combination, VertexSet};

pub use hd::{validate_ghd, validate_hd, Ghd, GhdReport};
pub use width::{exact_ghw, exact_hbw, exact_hw, SubcubicTree, WidthLimits};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("vertex {0} lies on no hyperedge")]
    IsolatedVertex(usize),
    #[error("hyperedge {0} is empty")]
    EmptyEdge(usize),
    #[error("hyperedge {0} uses undeclared vertex {1}")]
    UnknownVertex(usize, usize),
    #[error("instance too large: {what} = {size} exceeds limit {limit}")]
    InstanceTooLarge { what: &'static str, size: usize, limit: usize },
}

/// A hypergraph with a multiset of non-empty hyperedges and no isolated
/// vertices. `labels[i]` records where hyperedge `i` came from (its index by
/// default, the originating vertex for duals).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub vertices: VertexSet,
    pub edges: Vec<VertexSet>,
    pub labels: Vec<usize>,
}

/// A simple undirected graph on an arbitrary vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UGraph {
    pub adj: BTreeMap<usize, VertexSet>,
}

impl UGraph {
    pub fn with_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        UGraph { adj: vs.into_iter().map(|v| (v, VertexSet::new())).collect() }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj.entry(u).or_default().insert(v);
            self.adj.entry(v).or_default().insert(u);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn vertices(&self) -> VertexSet {
        self.adj.keys().copied().collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (&u, ns) in &self.adj {
            out.extend(ns.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    /// Connected components of the subgraph induced by `within`.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for &s in within {
            if !seen.insert(s) {
                continue;
            }
            let mut comp: VertexSet = [s].into();
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[&v] {
                    if within.contains(&w) && seen.insert(w) {
                        comp.insert(w);
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_tree(&self) -> bool {
        let n = self.adj.len();
        n >= 1 && self.edges().len() == n - 1 && self.components_within(&self.vertices()).len() == 1
    }
}

impl Hypergraph {
    pub fn new(vertices: VertexSet, edges: Vec<VertexSet>) -> Result<Self, HypergraphError> {
        let labels = (0..edges.len()).collect();
        Self::with_labels(vertices, edges, labels)
    }

    pub fn with_labels(vertices: VertexSet, edges: Vec<VertexSet>, labels: Vec<usize>) -> Result<Self, HypergraphError> {
        for (i, e) in edges.iter().enumerate() {
            if e.is_empty() {
                return Err(HypergraphError::EmptyEdge(i));
            }
            if let Some(&v) = e.iter().find(|v| !vertices.contains(v)) {
                return Err(HypergraphError::UnknownVertex(i, v));
            }
        }
        let covered: VertexSet = edges.iter().flatten().copied().collect();
        if let Some(&v) = vertices.iter().find(|v| !covered.contains(v)) {
            return Err(HypergraphError::IsolatedVertex(v));
        }
        Ok(Hypergraph { vertices, edges, labels })
    }

    /// The hypergraph with exactly the given edges, on their union.
    pub fn from_edges(edges: Vec<VertexSet>) -> Result<Self, HypergraphError> {
        let vertices = edges.iter().flatten().copied().collect();
        Self::new(vertices, edges)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Indices of hyperedges containing `v`.
    pub fn incident(&self, v: usize) -> BTreeSet<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].contains(&v)).collect()
    }

    /// Union of the hyperedges with the given indices.
    pub fn union_of<'a, I: IntoIterator<Item = &'a usize>>(&self, idx: I) -> VertexSet {
        idx.into_iter().flat_map(|&i| self.edges[i].iter().copied()).collect()
    }
}

/// The dual: vertex `i` for hyperedge `i`, and one hyperedge `e_v` for every
/// vertex `v` in increasing order, labelled with `v`.
pub fn dual(h: &Hypergraph) -> Hypergraph {
    let vertices: VertexSet = (0..h.edges.len()).collect();
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for &v in &h.vertices {
        edges.push(h.incident(v));
        labels.push(v);
    }
    Hypergraph { vertices, edges, labels }
}

pub fn two_section(h: &Hypergraph) -> UGraph {
    let mut g = UGraph::with_vertices(h.vertices.iter().copied());
    for e in &h.edges {
        let vs: Vec<usize> = e.iter().copied().collect();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                g.add_edge(vs[i], vs[j]);
            }
        }
    }
    g
}

/// Intersection graph of the hyperedges, on edge indices.
pub fn line_graph(h: &Hypergraph) -> UGraph {
    let m = h.edges.len();
    let mut g = UGraph::with_vertices(0..m);
    for i in 0..m {
        for j in i + 1..m {
            if !h.edges[i].is_disjoint(&h.edges[j]) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Result of a GYO run: whether everything was removed, and for each removed
/// hyperedge the edge it was absorbed into.
struct Gyo {
    acyclic: bool,
    parent: Vec<Option<usize>>,
}

/// GYO reduction. Vertices in at most one live edge are dropped; then one
/// live edge contained in another live edge is removed and attached to it.
/// The highest-index candidate edge and the highest-index container are
/// chosen, or the lowest ones when `ascending`.
fn gyo(h: &Hypergraph, ascending: bool) -> Gyo {
    let m = h.edges.len();
    let mut cur: Vec<VertexSet> = h.edges.clone();
    let mut live: Vec<bool> = vec![true; m];
    let mut parent = vec![None; m];
    let order: Vec<usize> = if ascending { (0..m).collect() } else { (0..m).rev().collect() };
    loop {
        // drop vertices in at most one live edge
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for i in (0..m).filter(|&i| live[i]) {
            for &v in &cur[i] {
                *count.entry(v).or_default() += 1;
            }
        }
        for i in (0..m).filter(|&i| live[i]) {
            cur[i].retain(|v| count[v] > 1);
        }
        let alive: Vec<usize> = order.iter().copied().filter(|&i| live[i]).collect();
        if alive.len() <= 1 {
            return Gyo { acyclic: alive.iter().all(|&i| cur[i].is_empty()), parent };
        }
        let mut step = None;
        'find: for &f in &alive {
            for &g in &alive {
                if g != f && cur[f].is_subset(&cur[g]) {
                    step = Some((f, g));
                    break 'find;
                }
            }
        }
        match step {
            Some((f, g)) => {
                live[f] = false;
                parent[f] = Some(g);
            }
            None => return Gyo { acyclic: false, parent },
        }
    }
}

pub fn is_alpha_acyclic(h: &Hypergraph) -> bool {
    gyo(h, false).acyclic
}

/// GYO with the opposite tie-breaking; used to check confluence.
pub fn is_alpha_acyclic_ascending(h: &Hypergraph) -> bool {
    gyo(h, true).acyclic
}

/// Exhaustive Helly test: no pairwise intersecting family of hyperedges with
/// empty common intersection. A minimal violating family has at most
/// `|V|` members, so families are searched by size up to that bound.
pub fn has_helly(h: &Hypergraph) -> bool {
    let distinct: Vec<&VertexSet> = h.edges.iter().collect::<BTreeSet<_>>().into_iter().collect();
    let m = distinct.len();
    let mut meets = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            meets[i][j] = !distinct[i].is_disjoint(distinct[j]);
        }
    }
    for size in 3..=m.min(h.vertices.len().max(3)) {
        let ok = for_each_combination(m, size, |idx| {
            let pairwise = idx.iter().all(|&i| idx.iter().all(|&j| meets[i][j]));
            if !pairwise {
                return true;
            }
            let common = distinct[idx[0]].iter().any(|v| idx.iter().all(|&i| distinct[i].contains(v)));
            common
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Chordality via maximum cardinality search and a perfect elimination
/// check on the reversed visiting order.
pub fn is_chordal(g: &UGraph) -> bool {
    let vs: Vec<usize> = g.adj.keys().copied().collect();
    let mut weight: BTreeMap<usize, usize> = vs.iter().map(|&v| (v, 0)).collect();
    let mut order = Vec::with_capacity(vs.len());
    let mut done = VertexSet::new();
    while order.len() < vs.len() {
        let v = *vs.iter().filter(|v| !done.contains(v)).max_by_key(|v| (weight[v], std::cmp::Reverse(**v))).unwrap();
        done.insert(v);
        order.push(v);
        for w in &g.adj[&v] {
            if !done.contains(w) {
                *weight.get_mut(w).unwrap() += 1;
            }
        }
    }
    // order reversed is a perfect elimination ordering iff chordal
    let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for &v in &order {
        let earlier: Vec<usize> = g.adj[&v].iter().copied().filter(|w| pos[w] < pos[&v]).collect();
        if let Some(&p) = earlier.iter().max_by_key(|w| pos[*w]) {
            for &w in &earlier {
                if w != p && !g.has_edge(p, w) {
                    return false;
                }
            }
        }
    }
    true
}

/// Maximal cliques (Bron–Kerbosch with pivoting).
pub fn maximal_cliques(g: &UGraph) -> Vec<VertexSet> {
    let mut out = Vec::new();
    bron_kerbosch(g, VertexSet::new(), g.vertices(), VertexSet::new(), &mut out);
    out.sort();
    out
}

fn bron_kerbosch(g: &UGraph, r: VertexSet, mut p: VertexSet, mut x: VertexSet, out: &mut Vec<VertexSet>) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let pivot = *p.union(&x).max_by_key(|u| g.adj[u].intersection(&p).count()).unwrap();
    let cands: Vec<usize> = p.difference(&g.adj[&pivot]).copied().collect();
    for v in cands {
        let nv = &g.adj[&v];
        let mut r2 = r.clone();
        r2.insert(v);
        bron_kerbosch(g, r2, p.intersection(nv).copied().collect(), x.intersection(nv).copied().collect(), out);
        p.remove(&v);
        x.insert(v);
    }
}

/// Every maximal clique of the 2-section is a hyperedge.
pub fn is_conformal(h: &Hypergraph) -> bool {
    let edges: BTreeSet<&VertexSet> = h.edges.iter().collect();
    maximal_cliques(&two_section(h)).iter().all(|k| edges.contains(k))
}

/// A tree on the vertices of a hypergraph in which every hyperedge induces
/// a connected subtree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinTreeWitness {
    pub vertices: VertexSet,
    pub tree_edges: Vec<(usize, usize)>,
}

impl JoinTreeWitness {
    pub fn tree(&self) -> UGraph {
        let mut g = UGraph::with_vertices(self.vertices.iter().copied());
        for &(u, v) in &self.tree_edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Checks that the tree spans exactly `V(H)` and every hyperedge is
    /// connected in it.
    pub fn verify(&self, h: &Hypergraph) -> bool {
        let t = self.tree();
        if self.vertices != h.vertices || !t.is_tree() || t.edges().len() != self.tree_edges.len() {
            return false;
        }
        h.edges.iter().all(|e| t.components_within(e).len() == 1)
    }
}

/// A host tree witnessing that `h` is a hypertree, if it is one. The tree is
/// read off a GYO reduction of the dual: a dual hyperedge absorbed into
/// another becomes a tree edge between the corresponding vertices of `h`.
pub fn hypertree_witness(h: &Hypergraph) -> Option<JoinTreeWitness> {
    let d = dual(h);
    let run = gyo(&d, false);
    if !run.acyclic {
        return None;
    }
    let origin = &d.labels;
    let tree_edges: Vec<(usize, usize)> =
        run.parent.iter().enumerate().filter_map(|(f, p)| p.map(|g| (origin[f].min(origin[g]), origin[f].max(origin[g])))).collect();
    let w = JoinTreeWitness { vertices: h.vertices.clone(), tree_edges };
    w.verify(h).then_some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::cycle_hypergraph;
    use crate::digraph::Digraph;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn hg(edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::from_edges(edges.iter().map(|e| set(e)).collect()).unwrap()
    }

    fn bicycle3() -> Hypergraph {
        cycle_hypergraph(&Digraph::bidirect(3, [(0, 1), (1, 2), (2, 0)]).unwrap(), 100).unwrap().hypergraph()
    }

    #[test]
    fn rejects_isolated_and_empty() {
        assert_eq!(Hypergraph::new(set(&[0, 1]), vec![set(&[0])]), Err(HypergraphError::IsolatedVertex(1)));
        assert_eq!(Hypergraph::new(set(&[0]), vec![set(&[])]), Err(HypergraphError::EmptyEdge(0)));
    }

    #[test]
    fn dual_examples() {
        let d = dual(&hg(&[&[0, 1]]));
        assert_eq!(d.vertices, set(&[0]));
        assert_eq!(d.edges, vec![set(&[0]), set(&[0])]);
        assert_eq!(d.labels, vec![0, 1]);
        let d = dual(&bicycle3());
        assert_eq!(d.vertices.len(), 5);
        assert!(d.edges.iter().all(|e| e.len() == 4));
        let h = hg(&[&[0, 1], &[1, 2], &[2, 3, 0]]);
        let dd = dual(&dual(&h));
        let mut a = h.edges.clone();
        a.sort();
        let mut b: Vec<VertexSet> =
            dd.edges.iter().map(|e| e.iter().map(|&i| h.vertices.iter().nth(i).copied().unwrap()).collect()).collect();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn sections_and_line_graphs() {
        assert_eq!(two_section(&hg(&[&[0, 1, 2]])).edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(two_section(&hg(&[&[0, 1], &[1, 2]])).edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(two_section(&bicycle3()).edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(line_graph(&hg(&[&[0], &[1]])).edges().is_empty());
        assert_eq!(line_graph(&hg(&[&[0, 1], &[1, 2], &[0, 2]])).edges().len(), 3);
        let h = bicycle3();
        assert_eq!(line_graph(&h), two_section(&dual(&h)));
    }

    #[test]
    fn acyclicity_examples() {
        assert!(is_alpha_acyclic(&hg(&[&[0, 1, 2]])));
        assert!(!is_alpha_acyclic(&hg(&[&[0, 1], &[1, 2], &[0, 2]])));
        assert!(!is_alpha_acyclic(&dual(&bicycle3())));
        assert!(is_alpha_acyclic(&hg(&[&[0, 1], &[1, 2], &[0, 2], &[0, 1, 2]])));
    }

    #[test]
    fn helly_examples() {
        assert!(has_helly(&hg(&[&[0, 1]])));
        assert!(!has_helly(&hg(&[&[0, 1], &[1, 2], &[0, 2]])));
        assert!(!has_helly(&bicycle3()));
    }

    #[test]
    fn chordal_examples() {
        let mut c4 = UGraph::with_vertices(0..4);
        for i in 0..4 {
            c4.add_edge(i, (i + 1) % 4);
        }
        assert!(!is_chordal(&c4));
        let mut tree = UGraph::with_vertices(0..5);
        for (u, v) in [(0, 1), (1, 2), (1, 3), (3, 4)] {
            tree.add_edge(u, v);
        }
        assert!(is_chordal(&tree));
        let mut k4 = UGraph::with_vertices(0..4);
        for i in 0..4 {
            for j in i + 1..4 {
                k4.add_edge(i, j);
            }
        }
        assert!(is_chordal(&k4));
    }

    #[test]
    fn conformal_examples() {
        assert!(is_conformal(&hg(&[&[0, 1, 2]])));
        assert!(!is_conformal(&hg(&[&[0, 1], &[1, 2], &[0, 2]])));
        let c3 = cycle_hypergraph(&Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap(), 10).unwrap();
        assert!(is_conformal(&c3.hypergraph()));
    }

    #[test]
    fn witness_examples() {
        let c3 = cycle_hypergraph(&Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap(), 10).unwrap();
        let w = hypertree_witness(&c3.hypergraph()).unwrap();
        assert_eq!(w.tree().edges(), vec![(0, 1), (1, 2)]);
        assert!(hypertree_witness(&bicycle3()).is_none());
        let w = hypertree_witness(&hg(&[&[0, 1], &[1, 2]])).unwrap();
        assert_eq!(w.tree().edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn two_section_chordality_alone_does_not_give_a_hypertree() {
        // the four-cycle plus its full hyperedge has a complete 2-section
        let h = hg(&[&[1, 2], &[2, 3], &[3, 4], &[4, 1], &[1, 2, 3, 4]]);
        assert!(is_chordal(&two_section(&h)));
        assert!(hypertree_witness(&h).is_none());
        assert!(!(is_conformal(&dual(&h)) && is_chordal(&line_graph(&h))));
    }
}
