//! Generalised and plain hypertree decompositions and their validators.

use std::collections::BTreeSet;

use super::{Hypergraph, UGraph};
use crate::vset::{fmt_set, VertexSet};

/// A rooted tree with a bag and a set of guard hyperedges per node. The
/// root has no parent. Generalised decompositions ignore the orientation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Ghd {
    pub parent: Vec<Option<usize>>,
    pub bags: Vec<VertexSet>,
    pub guards: Vec<BTreeSet<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhdReport {
    pub valid: bool,
    pub width: usize,
    pub violations: Vec<String>,
}

impl Ghd {
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn width(&self) -> usize {
        self.guards.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn children(&self, t: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.parent[c] == Some(t)).collect()
    }

    /// Nodes of the subtree rooted at `t`.
    pub fn subtree(&self, t: usize) -> Vec<usize> {
        let mut out = vec![t];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.children(out[i]));
            i += 1;
        }
        out
    }

    fn tree(&self) -> UGraph {
        let mut g = UGraph::with_vertices(0..self.len());
        for (c, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                g.add_edge(c, *p);
            }
        }
        g
    }
}

fn structure(h: &Hypergraph, dec: &Ghd, violations: &mut Vec<String>) {
    let n = dec.len();
    if dec.parent.len() != n || dec.guards.len() != n {
        violations.push("bags, guards and parents differ in length".into());
        return;
    }
    if n == 0 {
        if !h.edges.is_empty() {
            violations.push("empty decomposition of a non-empty hypergraph".into());
        }
        return;
    }
    let roots = dec.parent.iter().filter(|p| p.is_none()).count();
    if roots != 1 {
        violations.push(format!("{roots} roots"));
    }
    if dec.parent.iter().any(|p| p.is_some_and(|p| p >= n)) {
        violations.push("parent out of range".into());
        return;
    }
    let t = dec.tree();
    if !t.is_tree() || t.edges().len() != n - 1 {
        violations.push("parent pointers do not form a tree".into());
        return;
    }
    for (i, e) in h.edges.iter().enumerate() {
        if !dec.bags.iter().any(|b| e.is_subset(b)) {
            violations.push(format!("hyperedge {i} {} lies in no bag", fmt_set(e)));
        }
    }
    for &v in &h.vertices {
        let holding: VertexSet = (0..n).filter(|&t| dec.bags[t].contains(&v)).collect();
        if t.components_within(&holding).len() != 1 {
            violations.push(format!("nodes holding vertex {v} are not connected"));
        }
    }
    for (t, b) in dec.bags.iter().enumerate() {
        if let Some(v) = b.iter().find(|v| !h.vertices.contains(v)) {
            violations.push(format!("bag {t} holds unknown vertex {v}"));
        }
        if let Some(g) = dec.guards[t].iter().find(|&&g| g >= h.edges.len()) {
            violations.push(format!("guard {g} at node {t} is no hyperedge"));
            continue;
        }
        let cover = h.union_of(&dec.guards[t]);
        if !b.is_subset(&cover) {
            violations.push(format!("bag {t} not covered by its guards"));
        }
    }
}

/// Tree decomposition axioms for the hyperedges plus coverage of every bag
/// by the union of its guards.
pub fn validate_ghd(h: &Hypergraph, dec: &Ghd) -> GhdReport {
    let mut violations = Vec::new();
    structure(h, dec, &mut violations);
    GhdReport { valid: violations.is_empty(), width: dec.width(), violations }
}

/// [`validate_ghd`] plus the descendant condition: the guard union at `t`
/// meets the bags below `t` only inside `β(t)`.
pub fn validate_hd(h: &Hypergraph, dec: &Ghd) -> GhdReport {
    let mut violations = Vec::new();
    structure(h, dec, &mut violations);
    if violations.is_empty() {
        for t in 0..dec.len() {
            let cover = h.union_of(&dec.guards[t]);
            let below: VertexSet = dec.subtree(t).iter().flat_map(|&s| dec.bags[s].iter().copied()).collect();
            if cover.intersection(&below).any(|v| !dec.bags[t].contains(v)) {
                violations.push(format!("descendant condition fails at node {t}"));
            }
        }
    }
    GhdReport { valid: violations.is_empty(), width: dec.width(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn single_node() {
        let h = Hypergraph::from_edges(vec![set(&[0, 1, 2])]).unwrap();
        let dec = Ghd { parent: vec![None], bags: vec![set(&[0, 1, 2])], guards: vec![[0].into()] };
        let r = validate_hd(&h, &dec);
        assert!(r.valid, "{:?}", r.violations);
        assert_eq!(r.width, 1);
        let bad = Ghd { parent: vec![None], bags: vec![set(&[0, 1, 2])], guards: vec![BTreeSet::new()] };
        assert!(!validate_ghd(&h, &bad).valid);
    }

    #[test]
    fn descendant_condition_is_stricter() {
        // path a-b-c; root guarded by {a,b} but bag only {b}
        let h = Hypergraph::from_edges(vec![set(&[0, 1]), set(&[1, 2])]).unwrap();
        let dec = Ghd {
            parent: vec![None, Some(0), Some(0)],
            bags: vec![set(&[1]), set(&[0, 1]), set(&[1, 2])],
            guards: vec![[0].into(), [0].into(), [1].into()],
        };
        assert!(validate_ghd(&h, &dec).valid);
        assert!(!validate_hd(&h, &dec).valid);
    }

    #[test]
    fn disconnected_occurrence() {
        let h = Hypergraph::from_edges(vec![set(&[0, 1]), set(&[1, 2])]).unwrap();
        let dec = Ghd {
            parent: vec![None, Some(0), Some(1)],
            bags: vec![set(&[0, 1]), set(&[0]), set(&[1, 2])],
            guards: vec![[0].into(), [0].into(), [1].into()],
        };
        assert!(!validate_ghd(&h, &dec).valid);
    }
}
