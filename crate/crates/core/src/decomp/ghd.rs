//! Conversions from directed tree decompositions to directed branch
//! decompositions and to generalised hypertree decompositions of the dual
//! cycle hypergraph.

use std::collections::BTreeSet;

use super::dtd::{dtd_to_leaf_dtd, Dtd};
use super::{Dbd, DecompError};
use crate::cycles::cycle_hypergraph;
use crate::digraph::Digraph;
use crate::hypergraph::{dual, Ghd, Hypergraph, SubcubicTree};
use crate::vset::VertexSet;

/// Leaf decomposition, orientation forgotten, leaves carrying their bag
/// vertex. Each tree edge caches a minimum hitting set, which is never larger
/// than the guard of the corresponding arc.
pub fn dtd_to_dbd(d: &Digraph, dec: &Dtd, cap: usize) -> Result<Dbd, DecompError> {
    let leaf = dtd_to_leaf_dtd(d, dec);
    let edges: Vec<(usize, usize)> = leaf.arcs();
    let item = leaf.bags.iter().map(|b| if b.len() == 1 { b.iter().next().copied() } else { None }).collect();
    let tree = SubcubicTree::from_edges(leaf.len(), &edges, item);
    Dbd::with_hitting_sets(d, tree, cap)
}

/// Nodes of the smallest subtree containing `marked`.
fn spanning_subtree(dec: &Dtd, marked: &BTreeSet<usize>) -> BTreeSet<usize> {
    let n = dec.len();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut degree = vec![0usize; n];
    for (p, c) in dec.arcs() {
        degree[p] += 1;
        degree[c] += 1;
    }
    loop {
        let prune: Vec<usize> = alive.iter().copied().filter(|&t| degree[t] <= 1 && !marked.contains(&t)).collect();
        if prune.is_empty() || alive.len() == 1 {
            break;
        }
        for t in prune {
            if alive.len() == 1 {
                break;
            }
            alive.remove(&t);
            for (p, c) in dec.arcs() {
                if p == t && alive.contains(&c) {
                    degree[c] -= 1;
                }
                if c == t && alive.contains(&p) {
                    degree[p] -= 1;
                }
            }
        }
    }
    alive
}

/// Generalised hypertree decomposition of the dual cycle hypergraph on the
/// same tree: `v_C` sits in every bag of the smallest subtree meeting `C`,
/// and node `t` is guarded by the hyperedges `e_v` for `v ∈ Γ(t)`.
pub fn dtd_to_ghd(d: &Digraph, dec: &Dtd, cap: usize) -> Result<(Hypergraph, Ghd), DecompError> {
    let ch = cycle_hypergraph(d, cap)?;
    let h = dual(&ch.hypergraph());
    if ch.edges.is_empty() {
        return Ok((h, Ghd::default()));
    }
    let mut bags = vec![VertexSet::new(); dec.len()];
    for (c, cycle) in ch.edges.iter().enumerate() {
        let meets: BTreeSet<usize> = (0..dec.len()).filter(|&t| !dec.bags[t].is_disjoint(cycle)).collect();
        for t in spanning_subtree(dec, &meets) {
            bags[t].insert(c);
        }
    }
    let guards = (0..dec.len())
        .map(|t| {
            let gamma = dec.gamma(t);
            (0..h.edges.len()).filter(|&i| gamma.contains(&h.labels[i])).collect()
        })
        .collect();
    Ok((h, Ghd { parent: dec.parent.clone(), bags, guards }))
}
