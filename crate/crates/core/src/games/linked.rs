use std::collections::BTreeSet;

use crate::digraph::Digraph;
use crate::hypergraph::{Hypergraph, UGraph};
use crate::vset::{for_each_combination, VertexSet};

/// `W` is k-linked: for every `S` with `|S| ≤ k` some strong component of
/// `D - S` holds more than half of `W`.
pub fn is_k_linked(d: &Digraph, w: &VertexSet, k: usize) -> bool {
    let n = d.n();
    (0..=k.min(n)).all(|size| {
        for_each_combination(n, size, |c| {
            let s: VertexSet = c.iter().copied().collect();
            d.strong_components_without(&s).iter().any(|comp| 2 * comp.intersection(w).count() > w.len())
        })
    })
}

/// Connected components of `H` after deleting the vertices in `removed`.
pub(crate) fn components_after(h: &Hypergraph, removed: &VertexSet) -> Vec<VertexSet> {
    let rest: VertexSet = h.vertices.difference(removed).copied().collect();
    let mut g = UGraph::with_vertices(rest.iter().copied());
    for e in &h.edges {
        let kept: Vec<usize> = e.iter().copied().filter(|v| rest.contains(v)).collect();
        for pair in kept.windows(2) {
            g.add_edge(pair[0], pair[1]);
        }
    }
    g.components_within(&rest)
}

/// `W ⊆ E(H)` is k-hyperlinked: for every `S ⊆ E(H)` with `|S| < k` some
/// component of `H` minus `∪S` meets more than half of the edges in `W`.
pub fn is_k_hyperlinked(h: &Hypergraph, w: &BTreeSet<usize>, k: usize) -> bool {
    let m = h.edges.len();
    (0..k.min(m + 1)).all(|size| {
        for_each_combination(m, size, |c| {
            let removed = h.union_of(c);
            components_after(h, &removed).iter().any(|comp| 2 * w.iter().filter(|&&e| !h.edges[e].is_disjoint(comp)).count() > w.len())
        })
    })
}

/// Checks that `K ↦ (cycles through K) \ (cycles through S)` is a bijection
/// from the strong components of `D - S` containing a cycle onto the
/// components of the dual cycle hypergraph after deleting `∪ dual(S)`.
/// `dual` must be the dual of the cycle hypergraph of `d`, with labels
/// naming host vertices.
pub fn components_correspond(d: &Digraph, dual: &Hypergraph, s: &VertexSet) -> bool {
    let removed: VertexSet =
        (0..dual.edges.len()).filter(|&i| s.contains(&dual.labels[i])).flat_map(|i| dual.edges[i].iter().copied()).collect();
    let mut images: Vec<VertexSet> = d
        .strong_components_without(s)
        .into_iter()
        .filter(|k| k.len() >= 2)
        .map(|k| {
            let through: VertexSet =
                (0..dual.edges.len()).filter(|&i| k.contains(&dual.labels[i])).flat_map(|i| dual.edges[i].iter().copied()).collect();
            through.difference(&removed).copied().collect()
        })
        .collect();
    let mut comps = components_after(dual, &removed);
    images.sort();
    comps.sort();
    let distinct = images.windows(2).all(|p| p[0] != p[1]);
    distinct && images == comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::cycle_hypergraph;
    use crate::hypergraph::dual;

    fn bicycle(n: usize) -> Digraph {
        Digraph::bidirect(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn linked_sets_of_bidirected_triangle() {
        let d = bicycle(3);
        let all = d.vertices();
        assert!(is_k_linked(&d, &all, 0));
        // deleting one vertex leaves the other two together
        assert!(is_k_linked(&d, &all, 1));
        assert!(!is_k_linked(&d, &all, 2));
        assert!(!is_k_linked(&d, &[0].into(), 1));
    }

    #[test]
    fn hyperlinked_quantifies_strictly_below_k() {
        let h = Hypergraph::from_edges(vec![[0, 1].into(), [1, 2].into()]).unwrap();
        // no S to check when k = 0, so even the empty set qualifies
        assert!(is_k_hyperlinked(&h, &BTreeSet::new(), 0));
        assert!(!is_k_hyperlinked(&h, &BTreeSet::new(), 1));
        assert!(is_k_hyperlinked(&h, &[0, 1].into(), 1));
        // removing {0,1} leaves {2}, which meets only edge 1
        assert!(!is_k_hyperlinked(&h, &[0, 1].into(), 2));
    }

    #[test]
    fn component_correspondence() {
        let d = bicycle(4);
        let h = dual(&cycle_hypergraph(&d, 100).unwrap().hypergraph());
        for s in [VertexSet::new(), [0].into(), [0, 2].into(), [0, 1].into()] {
            assert!(components_correspond(&d, &h, &s), "{s:?}");
        }
    }
}
