//! Directed branch decompositions of digraphs and hyperbranch
//! decompositions of hypergraphs.

use std::collections::{BTreeMap, BTreeSet};

use super::{DecompError, Report};
use crate::cycles::{cycle_hypergraph, CycleHypergraph};
use crate::digraph::Digraph;
use crate::hypergraph::width::{hyperbranch_thickness, optimal_branch_tree};
use crate::hypergraph::{dual, Hypergraph, SubcubicTree, WidthLimits};
use crate::vset::VertexSet;

/// A subcubic tree whose leaves carry the vertices of a digraph, with a
/// cached hitting set per tree edge `(a, b)`, `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dbd {
    pub tree: SubcubicTree,
    pub hitting: BTreeMap<(usize, usize), VertexSet>,
}

/// A subcubic tree whose leaves carry hyperedge indices, with a cached cover
/// per tree edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hbd {
    pub tree: SubcubicTree,
    pub cover: BTreeMap<(usize, usize), BTreeSet<usize>>,
}

impl Dbd {
    /// Fills in minimum hitting sets for every tree edge.
    pub fn with_hitting_sets(d: &Digraph, tree: SubcubicTree, cap: usize) -> Result<Self, DecompError> {
        let ch = cycle_hypergraph(d, cap)?;
        let hitting = tree
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let cut = ch.cut(&tree.side(a, b));
                let s = ch.min_hitting_set(&cut, d.n()).expect("the whole vertex set hits every cycle");
                ((a, b), s)
            })
            .collect();
        Ok(Dbd { tree, hitting })
    }

    pub fn width(&self) -> usize {
        self.hitting.values().map(BTreeSet::len).max().unwrap_or(0)
    }
}

impl Hbd {
    pub fn with_covers(h: &Hypergraph, tree: SubcubicTree) -> Self {
        let cover = tree.edges().into_iter().map(|(a, b)| ((a, b), hyperbranch_thickness(h, &tree.side(a, b)).1)).collect();
        Hbd { tree, cover }
    }

    pub fn width(&self) -> usize {
        self.cover.values().map(BTreeSet::len).max().unwrap_or(0)
    }
}

/// Recomputes every thickness by exhaustive hitting-set search and checks
/// the cached sets. Thickness above `bound` is a violation.
pub fn validate_dbd(d: &Digraph, dec: &Dbd, bound: usize, cap: usize) -> Result<Report, DecompError> {
    let mut violations = Vec::new();
    if let Err(e) = dec.tree.check(d.n()) {
        violations.push(e);
        return Ok(Report::from(0, violations));
    }
    let ch = cycle_hypergraph(d, cap)?;
    let mut width = 0;
    for (a, b) in dec.tree.edges() {
        let cut = ch.cut(&dec.tree.side(a, b));
        match ch.min_hitting_set(&cut, bound) {
            Some(s) => {
                width = width.max(s.len());
                if let Some(cached) = dec.hitting.get(&(a, b)) {
                    let hits = cut.iter().all(|&c| !ch.edges[c].is_disjoint(cached));
                    if !hits || cached.len() != s.len() {
                        violations.push(format!("tree edge ({a},{b}): cached set is not a minimum hitting set"));
                    }
                }
            }
            None => violations.push(format!("tree edge ({a},{b}): thickness exceeds {bound}")),
        }
    }
    Ok(Report::from(width, violations))
}

pub fn validate_hbd(h: &Hypergraph, dec: &Hbd) -> Report {
    let mut violations = Vec::new();
    if let Err(e) = dec.tree.check(h.edges.len()) {
        violations.push(e);
        return Report::from(0, violations);
    }
    let mut width = 0;
    for (a, b) in dec.tree.edges() {
        let side = dec.tree.side(a, b);
        let (t, _) = hyperbranch_thickness(h, &side);
        width = width.max(t);
        if let Some(cached) = dec.cover.get(&(a, b)) {
            let other: BTreeSet<usize> = (0..h.edges.len()).filter(|i| !side.contains(i)).collect();
            let shared: VertexSet = h.union_of(&side).intersection(&h.union_of(&other)).copied().collect();
            let ok = cached.iter().all(|&i| i < h.edges.len()) && shared.is_subset(&h.union_of(cached));
            if !ok || cached.len() != t {
                violations.push(format!("tree edge ({a},{b}): cached cover is not a minimum cover"));
            }
        }
    }
    Report::from(width, violations)
}

/// Dual cycle hypergraph and, for every host vertex, the index of its
/// hyperedge `e_v`.
fn dual_index(ch: &CycleHypergraph) -> (Hypergraph, BTreeMap<usize, usize>) {
    let h = dual(&ch.hypergraph());
    let index = h.labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    (h, index)
}

/// Same tree, leaf `ℓ` carrying `e_δ(ℓ)`, covers dual to the hitting sets.
pub fn dbd_to_hbd(d: &Digraph, dec: &Dbd, cap: usize) -> Result<(Hypergraph, Hbd), DecompError> {
    let ch = cycle_hypergraph(d, cap)?;
    if let Some(&v) = ch.uncovered.iter().next() {
        return Err(DecompError::VertexOnNoCycle(v));
    }
    let (h, index) = dual_index(&ch);
    let item = dec.tree.item.iter().map(|x| x.map(|v| index[&v])).collect();
    let tree = SubcubicTree { adj: dec.tree.adj.clone(), item };
    let cover = dec.hitting.iter().map(|(&e, s)| (e, s.iter().map(|v| index[v]).collect())).collect();
    Ok((h, Hbd { tree, cover }))
}

/// Inverse of [`dbd_to_hbd`]; `h` must be the dual cycle hypergraph of `d`.
pub fn hbd_to_dbd(d: &Digraph, h: &Hypergraph, dec: &Hbd, cap: usize) -> Result<Dbd, DecompError> {
    let ch = cycle_hypergraph(d, cap)?;
    let (expected, _) = dual_index(&ch);
    if *h != expected || !ch.uncovered.is_empty() {
        return Err(DecompError::GroundMismatch);
    }
    let origin = &h.labels;
    let item = dec.tree.item.iter().map(|x| x.map(|i| origin[i])).collect();
    let tree = SubcubicTree { adj: dec.tree.adj.clone(), item };
    let hitting = dec.cover.iter().map(|(&e, s)| (e, s.iter().map(|&i| origin[i]).collect())).collect();
    Ok(Dbd { tree, hitting })
}

/// Exact directed branch-width over all cubic trees on `V(D)`.
pub fn exact_dbw(d: &Digraph, cap: usize, limits: WidthLimits) -> Result<(usize, Dbd), DecompError> {
    let n = d.n();
    if n > limits.max_leaves {
        return Err(crate::hypergraph::HypergraphError::InstanceTooLarge { what: "vertices", size: n, limit: limits.max_leaves }.into());
    }
    let ch = cycle_hypergraph(d, cap)?;
    let (w, tree) = optimal_branch_tree(n, |mask| {
        let side: VertexSet = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        ch.min_hitting_set(&ch.cut(&side), n).map_or(usize::MAX, |s| s.len())
    });
    let dbd = Dbd::with_hitting_sets(d, tree, cap)?;
    Ok((w, dbd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::exact_hbw;

    fn star(n: usize) -> SubcubicTree {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, n)).collect();
        SubcubicTree::from_edges(n + 1, &edges, (0..=n).map(|i| (i < n).then_some(i)).collect())
    }

    #[test]
    fn width_examples() {
        let digon = Digraph::bidirect(2, [(0, 1)]).unwrap();
        let tree = SubcubicTree::from_edges(2, &[(0, 1)], vec![Some(0), Some(1)]);
        let dbd = Dbd::with_hitting_sets(&digon, tree, 100).unwrap();
        let r = validate_dbd(&digon, &dbd, 2, 100).unwrap();
        assert!(r.valid && r.width == 1);

        let c3 = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let dbd = Dbd::with_hitting_sets(&c3, star(3), 100).unwrap();
        assert_eq!(validate_dbd(&c3, &dbd, 3, 100).unwrap().width, 1);

        let b3 = Digraph::bidirect(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let dbd = Dbd::with_hitting_sets(&b3, star(3), 100).unwrap();
        assert_eq!(validate_dbd(&b3, &dbd, 3, 100).unwrap().width, 1);
    }

    #[test]
    fn dual_round_trip() {
        let b3 = Digraph::bidirect(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let dbd = Dbd::with_hitting_sets(&b3, star(3), 100).unwrap();
        let (h, hbd) = dbd_to_hbd(&b3, &dbd, 100).unwrap();
        let r = validate_hbd(&h, &hbd);
        assert!(r.valid, "{:?}", r.violations);
        assert_eq!(r.width, 1);
        assert_eq!(hbd_to_dbd(&b3, &h, &hbd, 100).unwrap(), dbd);
        let other = Hypergraph::from_edges(vec![[0].into()]).unwrap();
        assert_eq!(hbd_to_dbd(&b3, &other, &hbd, 100), Err(DecompError::GroundMismatch));
    }

    #[test]
    fn exact_widths_agree_on_bidirected_triangle() {
        let b3 = Digraph::bidirect(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let (w, dbd) = exact_dbw(&b3, 100, WidthLimits::default()).unwrap();
        assert_eq!(w, 1);
        assert_eq!(dbd.width(), 1);
        let h = dual(&cycle_hypergraph(&b3, 100).unwrap().hypergraph());
        assert_eq!(exact_hbw(&h, WidthLimits::default()).unwrap().0, 1);
    }

    #[test]
    fn tampered_cache_is_reported() {
        let b3 = Digraph::bidirect(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut dbd = Dbd::with_hitting_sets(&b3, star(3), 100).unwrap();
        let key = *dbd.hitting.keys().next().unwrap();
        dbd.hitting.insert(key, VertexSet::new());
        assert!(!validate_dbd(&b3, &dbd, 3, 100).unwrap().valid);
    }
}
