//! Directed cycles, the cycle hypergraph, cuts, hitting sets and chains of
//! cycles.

use thiserror::Error;

use crate::digraph::Digraph;
use crate::hypergraph::Hypergraph;
use crate::vset::{for_each_combination, VertexSet};

pub const DEFAULT_CYCLE_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("more than {cap} directed cycles (stopped at {found})")]
    CapExceeded { cap: usize, found: usize },
}

/// A directed cycle stored from its smallest vertex; the closing edge is
/// implicit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedCycle(pub Vec<usize>);

impl DirectedCycle {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| (self.0[i], self.0[(i + 1) % k]))
    }

    /// Rotates an arbitrary cycle sequence to start at its minimum.
    pub fn canonical(seq: Vec<usize>) -> Self {
        let pos = seq.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i).unwrap_or(0);
        let mut s = seq;
        s.rotate_left(pos);
        DirectedCycle(s)
    }

    pub fn is_cycle_of(&self, d: &Digraph) -> bool {
        self.0.len() >= 2 && self.vertex_set().len() == self.0.len() && self.edges().all(|(u, v)| d.has_edge(u, v))
    }
}

/// All simple directed cycles, each from its minimum vertex, sorted
/// lexicographically. Fails once more than `cap` cycles are found.
pub fn enumerate_cycles(d: &Digraph, cap: usize) -> Result<Vec<DirectedCycle>, CycleError> {
    let n = d.n();
    let mut out = Vec::new();
    for s in 0..n {
        // only vertices above s that lie in the strong component of s there
        let low: VertexSet = (0..s).collect();
        let allowed = {
            let fwd = d.reach(&[s].into(), &low);
            let bwd = d.co_reach(&[s].into(), &low);
            fwd.intersection(&bwd).copied().collect::<VertexSet>()
        };
        if allowed.len() < 2 {
            continue;
        }
        let mut path = vec![s];
        let mut on_path = vec![false; n];
        on_path[s] = true;
        extend(d, s, &allowed, &mut path, &mut on_path, &mut out, cap)?;
    }
    out.sort();
    Ok(out)
}

fn extend(
    d: &Digraph,
    s: usize,
    allowed: &VertexSet,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<DirectedCycle>,
    cap: usize,
) -> Result<(), CycleError> {
    let v = *path.last().unwrap();
    for &w in d.succ(v) {
        if w == s {
            if out.len() >= cap {
                return Err(CycleError::CapExceeded { cap, found: out.len() });
            }
            out.push(DirectedCycle(path.clone()));
        } else if allowed.contains(&w) && !on_path[w] {
            on_path[w] = true;
            path.push(w);
            extend(d, s, allowed, path, on_path, out, cap)?;
            path.pop();
            on_path[w] = false;
        }
    }
    Ok(())
}

/// The cycle hypergraph: one hyperedge per directed cycle, duplicates kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleHypergraph {
    pub host: Digraph,
    pub cycles: Vec<DirectedCycle>,
    pub edges: Vec<VertexSet>,
    /// Host vertices lying on no cycle; not vertices of the hypergraph.
    pub uncovered: VertexSet,
}

pub fn cycle_hypergraph(d: &Digraph, cap: usize) -> Result<CycleHypergraph, CycleError> {
    let cycles = enumerate_cycles(d, cap)?;
    let edges: Vec<VertexSet> = cycles.iter().map(DirectedCycle::vertex_set).collect();
    let covered: VertexSet = edges.iter().flatten().copied().collect();
    let uncovered = d.vertices().difference(&covered).copied().collect();
    Ok(CycleHypergraph { host: d.clone(), cycles, edges, uncovered })
}

impl CycleHypergraph {
    pub fn vertices(&self) -> VertexSet {
        self.edges.iter().flatten().copied().collect()
    }

    /// As a plain hypergraph over the host's vertex ids (only covered ones).
    pub fn hypergraph(&self) -> Hypergraph {
        Hypergraph::new(self.vertices(), self.edges.clone()).expect("cycle hyperedges are non-empty")
    }

    /// Indices of hyperedges meeting both `x` and its complement.
    pub fn cut(&self, x: &VertexSet) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| {
                let e = &self.edges[i];
                e.iter().any(|v| x.contains(v)) && e.iter().any(|v| !x.contains(v))
            })
            .collect()
    }

    /// A smallest vertex set meeting every target hyperedge, the
    /// lexicographically least among those, if one of size at most `bound`
    /// exists.
    pub fn min_hitting_set(&self, targets: &[usize], bound: usize) -> Option<VertexSet> {
        min_hitting_set(&self.edges, targets, bound)
    }

    fn disjoint(&self, i: usize, j: usize) -> bool {
        self.edges[i].is_disjoint(&self.edges[j])
    }

    /// Consecutive cycles meet, cycles two or more apart are disjoint.
    pub fn is_chain(&self, seq: &[usize]) -> bool {
        let distinct: std::collections::BTreeSet<_> = seq.iter().collect();
        if distinct.len() != seq.len() || seq.iter().any(|&i| i >= self.edges.len()) {
            return false;
        }
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                let meet = !self.disjoint(seq[i], seq[j]);
                if meet != (j == i + 1) {
                    return false;
                }
            }
        }
        true
    }

    /// Closed chain: both maximal proper sub-chains are chains, the ends
    /// meet, and for three cycles no vertex lies on all of them.
    pub fn is_closed_chain(&self, seq: &[usize]) -> bool {
        let l = seq.len();
        if l < 3 || !self.is_chain(&seq[..l - 1]) || !self.is_chain(&seq[1..]) {
            return false;
        }
        if self.disjoint(seq[0], seq[l - 1]) {
            return false;
        }
        let distinct: std::collections::BTreeSet<_> = seq.iter().collect();
        if distinct.len() != l {
            return false;
        }
        if l == 3 {
            let common = self.edges[seq[0]].iter().any(|v| self.edges[seq[1]].contains(v) && self.edges[seq[2]].contains(v));
            if common {
                return false;
            }
        }
        true
    }

    /// The first closed chain found by length-bounded depth-first search,
    /// shortest lengths first.
    pub fn find_closed_chain(&self) -> Option<CycleChain> {
        self.closed_chains(1).into_iter().next()
    }

    /// Up to `limit` closed chains, ordered by length and then
    /// lexicographically; each chain starts with its smallest cycle index.
    pub fn closed_chains(&self, limit: usize) -> Vec<CycleChain> {
        let m = self.edges.len();
        let mut found = Vec::new();
        for len in 3..=m {
            for start in 0..m {
                let mut seq = vec![start];
                self.chain_search(len, &mut seq, &mut found, limit);
                if found.len() >= limit {
                    return found;
                }
            }
        }
        found
    }

    fn chain_search(&self, len: usize, seq: &mut Vec<usize>, found: &mut Vec<CycleChain>, limit: usize) {
        if found.len() >= limit {
            return;
        }
        let j = seq.len();
        if j == len {
            if self.is_closed_chain(seq) {
                found.push(CycleChain { cycles: seq.clone(), closed: true });
            }
            return;
        }
        let first = seq[0];
        for c in first + 1..self.edges.len() {
            if seq.contains(&c) || self.disjoint(c, seq[j - 1]) {
                continue;
            }
            let ok =
                (0..j.saturating_sub(1)).all(|i| if i == 0 && j == len - 1 { !self.disjoint(c, seq[0]) } else { self.disjoint(c, seq[i]) });
            if !ok {
                continue;
            }
            seq.push(c);
            self.chain_search(len, seq, found, limit);
            seq.pop();
        }
    }
}

/// Smallest set meeting every `targets` edge, searched over the union of the
/// targets by increasing size in lexicographic order.
pub fn min_hitting_set(edges: &[VertexSet], targets: &[usize], bound: usize) -> Option<VertexSet> {
    let universe: Vec<usize> = targets.iter().flat_map(|&i| edges[i].iter().copied()).collect::<VertexSet>().into_iter().collect();
    for size in 0..=bound.min(universe.len()) {
        let mut hit = None;
        for_each_combination(universe.len(), size, |idx| {
            let s: VertexSet = idx.iter().map(|&i| universe[i]).collect();
            if targets.iter().all(|&t| edges[t].iter().any(|v| s.contains(v))) {
                hit = Some(s);
                false
            } else {
                true
            }
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// An ordered sequence of cycle indices into a [`CycleHypergraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleChain {
    pub cycles: Vec<usize>,
    pub closed: bool,
}

/// Strong connectivity decided through cycles: a single vertex, or every
/// vertex lies on a cycle and the intersection graph of cycles is connected.
/// A path of pairwise meeting cycles can always be shortened to a chain, so
/// connectivity of the intersection graph decides chain existence.
pub fn strongly_connected_via_chains(d: &Digraph, cap: usize) -> Result<bool, CycleError> {
    if d.n() == 1 {
        return Ok(true);
    }
    let ch = cycle_hypergraph(d, cap)?;
    if d.n() == 0 || !ch.uncovered.is_empty() {
        return Ok(false);
    }
    let m = ch.edges.len();
    let mut seen = vec![false; m];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..m {
            if !seen[j] && !ch.disjoint(i, j) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

/// Shortens a sequence of cycles in which consecutive ones meet into a chain
/// from its first to its last cycle, by jumping to the furthest later cycle
/// that meets the current one.
pub fn prune_to_chain(ch: &CycleHypergraph, walk: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < walk.len() {
        out.push(walk[i]);
        if i + 1 == walk.len() {
            break;
        }
        let next = (i + 1..walk.len()).rev().find(|&j| !ch.disjoint(walk[i], walk[j])).unwrap_or(i + 1);
        i = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn dicycle(n: usize) -> Digraph {
        Digraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn bicycle(n: usize) -> Digraph {
        Digraph::bidirect(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn a4() -> Digraph {
        Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (3, 1), (0, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_cycles(&dicycle(3), 10).unwrap(), vec![DirectedCycle(vec![0, 1, 2])]);
        assert_eq!(enumerate_cycles(&bicycle(2), 10).unwrap(), vec![DirectedCycle(vec![0, 1])]);
        let b3 = enumerate_cycles(&bicycle(3), 10).unwrap();
        assert_eq!(
            b3,
            vec![
                DirectedCycle(vec![0, 1]),
                DirectedCycle(vec![0, 1, 2]),
                DirectedCycle(vec![0, 2]),
                DirectedCycle(vec![0, 2, 1]),
                DirectedCycle(vec![1, 2]),
            ]
        );
        assert_eq!(enumerate_cycles(&bicycle(3), 4), Err(CycleError::CapExceeded { cap: 4, found: 4 }));
    }

    #[test]
    fn hypergraph_examples() {
        let ch = cycle_hypergraph(&bicycle(3), 100).unwrap();
        assert_eq!(ch.edges.len(), 5);
        assert_eq!(ch.edges.iter().filter(|e| e.len() == 3).count(), 2);
        let dag = Digraph::from_edges(2, [(0, 1)]).unwrap();
        let ch = cycle_hypergraph(&dag, 100).unwrap();
        assert!(ch.edges.is_empty());
        assert_eq!(ch.uncovered, set(&[0, 1]));
    }

    #[test]
    fn cut_examples() {
        let c3 = cycle_hypergraph(&dicycle(3), 100).unwrap();
        assert_eq!(c3.cut(&set(&[0])), vec![0]);
        assert!(c3.cut(&set(&[0, 1, 2])).is_empty());
        let b3 = cycle_hypergraph(&bicycle(3), 100).unwrap();
        assert_eq!(b3.cut(&set(&[0])).len(), 4);
        assert_eq!(b3.cut(&set(&[0])), b3.cut(&set(&[1, 2])));
    }

    #[test]
    fn hitting_set_examples() {
        let c3 = cycle_hypergraph(&dicycle(3), 100).unwrap();
        assert_eq!(c3.min_hitting_set(&[], 0), Some(VertexSet::new()));
        assert_eq!(c3.min_hitting_set(&[0], 1), Some(set(&[0])));
        let b3 = cycle_hypergraph(&bicycle(3), 100).unwrap();
        assert_eq!(b3.min_hitting_set(&[0, 1, 2, 3, 4], 1), None);
        assert_eq!(b3.min_hitting_set(&[0, 1, 2, 3, 4], 2), Some(set(&[0, 1])));
    }

    #[test]
    fn chain_examples() {
        let ch = cycle_hypergraph(&a4(), 100).unwrap();
        let find = |vs: &[usize]| ch.edges.iter().position(|e| *e == set(vs)).unwrap();
        // C1 = {v1,v2,v4}, C2 = {v2,v3,v4}, C3 = {v1,v3}
        let (c1, c2, c3) = (find(&[0, 1, 3]), find(&[1, 2, 3]), find(&[0, 2]));
        assert!(ch.is_chain(&[c1]));
        assert!(!ch.is_chain(&[c1, c2, c3]));
        assert!(ch.is_closed_chain(&[c1, c2, c3]));
        let found = ch.find_closed_chain().unwrap();
        assert_eq!(found.cycles.len(), 3);
        assert!(ch.is_closed_chain(&found.cycles));

        let p3 = cycle_hypergraph(&Digraph::bidirect(3, [(0, 1), (1, 2)]).unwrap(), 100).unwrap();
        assert!(p3.is_chain(&[0, 1]));

        let b4 = cycle_hypergraph(&bicycle(4), 100).unwrap();
        let chain = b4.find_closed_chain().unwrap();
        assert_eq!(chain.cycles.len(), 4);
        assert!(chain.cycles.iter().all(|&i| b4.edges[i].len() == 2));

        assert!(cycle_hypergraph(&dicycle(3), 100).unwrap().find_closed_chain().is_none());
    }

    #[test]
    fn star_digons_are_not_a_closed_chain() {
        let star = Digraph::bidirect(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let ch = cycle_hypergraph(&star, 100).unwrap();
        assert!(!ch.is_closed_chain(&[0, 1, 2]));
        assert!(ch.find_closed_chain().is_none());
    }

    #[test]
    fn chain_connectivity_examples() {
        assert!(strongly_connected_via_chains(&Digraph::new(1), 100).unwrap());
        assert!(strongly_connected_via_chains(&bicycle(2), 100).unwrap());
        let two = Digraph::bidirect(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!strongly_connected_via_chains(&two, 100).unwrap());
    }

    #[test]
    fn pruned_walk_is_a_chain() {
        let ch = cycle_hypergraph(&bicycle(5), 1000).unwrap();
        let digon = |a: usize, b: usize| ch.edges.iter().position(|e| *e == set(&[a, b])).unwrap();
        let tri = ch.edges.iter().position(|e| e.len() == 5).unwrap();
        let walk = [digon(0, 1), digon(1, 2), tri, digon(3, 4)];
        let chain = prune_to_chain(&ch, &walk);
        assert!(ch.is_chain(&chain));
        assert_eq!(chain.first(), walk.first());
        assert_eq!(chain.last(), walk.last());
    }
}
