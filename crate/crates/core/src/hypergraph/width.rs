//! Exact width oracles for small hypergraphs: hypertree-width (k-decomp
//! search), generalised hypertree-width (elimination-order dynamic
//! programming) and hyperbranch-width (enumeration of cubic trees).

use std::collections::{BTreeSet, HashMap};

use super::hd::Ghd;
use super::{Hypergraph, HypergraphError};
use crate::vset::{for_each_combination, VertexSet};

/// Size limits beyond which the exhaustive oracles refuse to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WidthLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Leaves of the trees enumerated for branch-width style parameters.
    pub max_leaves: usize,
}

impl Default for WidthLimits {
    fn default() -> Self {
        WidthLimits { max_vertices: 24, max_edges: 24, max_leaves: 9 }
    }
}

fn too_large(what: &'static str, size: usize, limit: usize) -> Result<(), HypergraphError> {
    if size > limit {
        Err(HypergraphError::InstanceTooLarge { what, size, limit })
    } else {
        Ok(())
    }
}

/// Smallest set of hyperedges whose union contains `target`, the
/// lexicographically least among the smallest.
pub fn min_edge_cover(h: &Hypergraph, target: &VertexSet) -> Option<BTreeSet<usize>> {
    if target.is_empty() {
        return Some(BTreeSet::new());
    }
    let cands: Vec<usize> = (0..h.edges.len()).filter(|&i| !h.edges[i].is_disjoint(target)).collect();
    for size in 1..=cands.len() {
        let mut found = None;
        for_each_combination(cands.len(), size, |idx| {
            let covered = target.iter().all(|v| idx.iter().any(|&i| h.edges[cands[i]].contains(v)));
            if covered {
                found = Some(idx.iter().map(|&i| cands[i]).collect());
                false
            } else {
                true
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

#[derive(Clone, Debug)]
struct HdNode {
    bag: VertexSet,
    guard: BTreeSet<usize>,
    children: Vec<HdNode>,
}

struct KDecomp<'a> {
    h: &'a Hypergraph,
    k: usize,
    memo: HashMap<(VertexSet, VertexSet), Option<HdNode>>,
}

impl KDecomp<'_> {
    /// Components of `within` where two vertices are adjacent when some
    /// hyperedge contains both.
    fn components(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for &s in within {
            if seen.contains(&s) {
                continue;
            }
            let mut comp: VertexSet = [s].into();
            seen.insert(s);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for e in self.h.edges.iter().filter(|e| e.contains(&v)) {
                    for &w in e {
                        if within.contains(&w) && seen.insert(w) {
                            comp.insert(w);
                            stack.push(w);
                        }
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    fn solve(&mut self, comp: &VertexSet, conn: &VertexSet) -> Option<HdNode> {
        let key = (comp.clone(), conn.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let scope: VertexSet = comp.union(conn).copied().collect();
        let cands: Vec<usize> = (0..self.h.edges.len()).filter(|&i| !self.h.edges[i].is_disjoint(&scope)).collect();
        let mut result = None;
        'outer: for size in 1..=self.k.min(cands.len()) {
            let mut choices = Vec::new();
            for_each_combination(cands.len(), size, |idx| {
                choices.push(idx.iter().map(|&i| cands[i]).collect::<BTreeSet<usize>>());
                true
            });
            for guard in choices {
                let cover = self.h.union_of(&guard);
                if !conn.is_subset(&cover) || cover.is_disjoint(comp) {
                    continue;
                }
                let bag: VertexSet = cover.intersection(&scope).copied().collect();
                let rest: VertexSet = comp.difference(&bag).copied().collect();
                let mut children = Vec::new();
                let mut ok = true;
                for c in self.components(&rest) {
                    let touching: VertexSet = self.h.edges.iter().filter(|e| !e.is_disjoint(&c)).flat_map(|e| e.iter().copied()).collect();
                    let child_conn: VertexSet = touching.intersection(&bag).copied().collect();
                    match self.solve(&c, &child_conn) {
                        Some(node) => children.push(node),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    result = Some(HdNode { bag, guard, children });
                    break 'outer;
                }
            }
        }
        self.memo.insert(key, result.clone());
        result
    }
}

fn flatten(node: &HdNode, parent: Option<usize>, out: &mut Ghd) {
    let id = out.bags.len();
    out.bags.push(node.bag.clone());
    out.guards.push(node.guard.clone());
    out.parent.push(parent);
    for c in &node.children {
        flatten(c, Some(id), out);
    }
}

/// Hypertree decomposition of width at most `k`, if one exists.
pub fn hd_of_width(h: &Hypergraph, k: usize) -> Option<Ghd> {
    if h.edges.is_empty() {
        return Some(Ghd::default());
    }
    let mut search = KDecomp { h, k, memo: HashMap::new() };
    let root = search.solve(&h.vertices, &VertexSet::new())?;
    let mut out = Ghd::default();
    flatten(&root, None, &mut out);
    Some(out)
}

/// Exact hypertree-width when it is at most `k_max`, with a witness.
pub fn exact_hw(h: &Hypergraph, k_max: usize, limits: WidthLimits) -> Result<Option<(usize, Ghd)>, HypergraphError> {
    too_large("vertices", h.vertices.len(), limits.max_vertices)?;
    too_large("edges", h.edges.len(), limits.max_edges)?;
    if h.edges.is_empty() {
        return Ok(Some((0, Ghd::default())));
    }
    for k in 1..=k_max {
        if let Some(dec) = hd_of_width(h, k) {
            return Ok(Some((k, dec)));
        }
    }
    Ok(None)
}

/// Exact generalised hypertree-width with a witness. Every tree
/// decomposition is refined by one coming from an elimination ordering and
/// the edge cover number is monotone, so minimising over orderings is exact.
pub fn exact_ghw(h: &Hypergraph, limits: WidthLimits) -> Result<(usize, Ghd), HypergraphError> {
    let n = h.vertices.len();
    too_large("vertices", n, limits.max_vertices.min(20))?;
    too_large("edges", h.edges.len(), limits.max_edges)?;
    if n == 0 {
        return Ok((0, Ghd::default()));
    }
    let verts: Vec<usize> = h.vertices.iter().copied().collect();
    let index: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![0u32; n];
    for e in &h.edges {
        let mask: u32 = e.iter().map(|v| 1u32 << index[v]).sum();
        for v in e {
            adj[index[v]] |= mask & !(1 << index[v]);
        }
    }
    let to_set = |mask: u32| -> VertexSet { (0..n).filter(|i| mask >> i & 1 == 1).map(|i| verts[i]).collect() };
    let mut rho: HashMap<u32, usize> = HashMap::new();
    let mut cost =
        |mask: u32| -> usize { *rho.entry(mask).or_insert_with(|| min_edge_cover(h, &to_set(mask)).map_or(usize::MAX, |c| c.len())) };
    // vertices outside done ∪ {v} reachable from v through done
    let q = |done: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut out = 0u32;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = adj[x] & !seen;
            seen |= nb;
            out |= nb & !done;
            frontier |= nb & done;
        }
        out
    };
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = vec![usize::MAX; 1 << n];
    let mut choice = vec![0u8; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let prev = s & !(1 << v);
            if best[prev as usize] == usize::MAX {
                continue;
            }
            let c = best[prev as usize].max(cost(q(prev, v) | 1 << v));
            if c < best[s as usize] {
                best[s as usize] = c;
                choice[s as usize] = v as u8;
            }
        }
    }
    // recover the ordering
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut dec = Ghd::default();
    let mut done = 0u32;
    let mut bag_masks = Vec::with_capacity(n);
    for &v in &order {
        bag_masks.push(q(done, v) | 1 << v);
        done |= 1 << v;
    }
    for (i, &v) in order.iter().enumerate() {
        let others = bag_masks[i] & !(1 << v);
        let parent = (0..n).filter(|&w| others >> w & 1 == 1).min_by_key(|&w| pos[w]).map(|w| pos[w]);
        let bag = to_set(bag_masks[i]);
        dec.guards.push(min_edge_cover(h, &bag).unwrap_or_default());
        dec.bags.push(bag);
        dec.parent.push(parent);
    }
    // a disconnected hypergraph yields a forest: hang extra roots below the last
    let last = n - 1;
    for i in 0..n - 1 {
        if dec.parent[i].is_none() {
            dec.parent[i] = Some(last);
        }
    }
    Ok((best[full as usize], dec))
}

/// An unrooted tree whose leaves carry distinct items. Internal nodes have
/// degree at most three.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcubicTree {
    pub adj: Vec<Vec<usize>>,
    /// Item carried by each node; only leaves carry items.
    pub item: Vec<Option<usize>>,
}

impl SubcubicTree {
    pub fn from_edges(nodes: usize, edges: &[(usize, usize)], item: Vec<Option<usize>>) -> Self {
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        SubcubicTree { adj, item }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }

    pub fn node_of(&self, item: usize) -> Option<usize> {
        self.item.iter().position(|&x| x == Some(item))
    }

    /// Items on the side of `a` when the tree edge `ab` is removed.
    pub fn side(&self, a: usize, b: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = vec![(a, b)];
        while let Some((x, from)) = stack.pop() {
            if let Some(i) = self.item[x] {
                out.insert(i);
            }
            for &y in &self.adj[x] {
                if y != from {
                    stack.push((y, x));
                }
            }
        }
        out
    }

    /// Structural checks: a tree, maximum degree three, items exactly on the
    /// leaves and forming `0..items` without repetition.
    pub fn check(&self, items: usize) -> Result<(), String> {
        let n = self.len();
        if n == 0 {
            return if items == 0 { Ok(()) } else { Err("empty tree".into()) };
        }
        if self.edges().len() != n - 1 {
            return Err("not a tree (edge count)".into());
        }
        if self.side(0, usize::MAX).len() != self.item.iter().flatten().count() {
            return Err("items repeat".into());
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err("not connected".into());
        }
        if self.adj.iter().any(|a| a.len() > 3) {
            return Err("degree above three".into());
        }
        for x in 0..n {
            let leaf = self.adj[x].len() <= 1;
            if leaf != self.item[x].is_some() {
                return Err(format!("node {x}: items must sit exactly on leaves"));
            }
        }
        let carried: BTreeSet<usize> = self.item.iter().flatten().copied().collect();
        if carried != (0..items).collect() {
            return Err("leaf items are not a bijection".into());
        }
        Ok(())
    }
}

/// Minimum over all cubic trees with `m` labelled leaves of the maximum
/// thickness of a tree edge. `thickness` receives the item bitmask of one
/// side. Suppressing degree-two nodes does not change the set of splits, so
/// cubic trees cover every subcubic shape.
pub fn optimal_branch_tree<F>(m: usize, mut thickness: F) -> (usize, SubcubicTree)
where
    F: FnMut(u64) -> usize,
{
    if m == 0 {
        return (0, SubcubicTree { adj: Vec::new(), item: Vec::new() });
    }
    if m == 1 {
        return (0, SubcubicTree { adj: vec![Vec::new()], item: vec![Some(0)] });
    }
    let items = |nodes: usize| (0..nodes).map(|x| (x < m).then_some(x)).collect::<Vec<_>>();
    if m == 2 {
        let w = thickness(1);
        return (w, SubcubicTree::from_edges(2, &[(0, 1)], items(2)));
    }
    let mut memo: HashMap<u64, usize> = HashMap::new();
    let mut best: Option<(usize, Vec<(usize, usize)>)> = None;
    let start = vec![(0, m), (1, m), (2, m)];
    let mut eval = |edges: &[(usize, usize)]| {
        let nodes = 2 * m - 2;
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        // subtree masks with the tree rooted at leaf 0
        let mut parent = vec![usize::MAX; nodes];
        let mut order = vec![0usize];
        parent[0] = 0;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for &y in &adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    order.push(y);
                }
            }
            i += 1;
        }
        let mut mask = vec![0u64; nodes];
        let mut width = 0;
        for &x in order.iter().rev() {
            if x < m {
                mask[x] |= 1 << x;
            }
            if x != 0 {
                let t = *memo.entry(mask[x]).or_insert_with(|| thickness(mask[x]));
                width = width.max(t);
                let p = parent[x];
                mask[p] |= mask[x];
            }
        }
        if best.as_ref().is_none_or(|(w, _)| width < *w) {
            best = Some((width, edges.to_vec()));
        }
    };
    grow(m, 3, start, m + 1, &mut eval);
    let (w, edges) = best.unwrap();
    (w, SubcubicTree::from_edges(2 * m - 2, &edges, items(2 * m - 2)))
}

fn grow<F: FnMut(&[(usize, usize)])>(m: usize, next_leaf: usize, edges: Vec<(usize, usize)>, next_node: usize, eval: &mut F) {
    if next_leaf == m {
        eval(&edges);
        return;
    }
    for i in 0..edges.len() {
        let (a, b) = edges[i];
        let mut e = edges.clone();
        e[i] = (a, next_node);
        e.push((next_node, b));
        e.push((next_leaf, next_node));
        grow(m, next_leaf + 1, e, next_node + 1, eval);
    }
}

/// Thickness of a split `(F1, F2)` of the hyperedges: the fewest hyperedges
/// covering `∪F1 ∩ ∪F2`.
pub fn hyperbranch_thickness(h: &Hypergraph, side: &BTreeSet<usize>) -> (usize, BTreeSet<usize>) {
    let other: BTreeSet<usize> = (0..h.edges.len()).filter(|i| !side.contains(i)).collect();
    let shared: VertexSet = h.union_of(side).intersection(&h.union_of(&other)).copied().collect();
    let cover = min_edge_cover(h, &shared).expect("shared vertices lie on hyperedges");
    (cover.len(), cover)
}

/// Exact hyperbranch-width with an optimal tree whose leaves carry the
/// hyperedge indices.
pub fn exact_hbw(h: &Hypergraph, limits: WidthLimits) -> Result<(usize, SubcubicTree), HypergraphError> {
    too_large("edges", h.edges.len(), limits.max_leaves)?;
    let m = h.edges.len();
    Ok(optimal_branch_tree(m, |mask| {
        let side: BTreeSet<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        hyperbranch_thickness(h, &side).0
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::cycle_hypergraph;
    use crate::digraph::Digraph;
    use crate::hypergraph::{dual, validate_ghd, validate_hd};

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn dual_cycles(d: &Digraph) -> Hypergraph {
        dual(&cycle_hypergraph(d, 1000).unwrap().hypergraph())
    }

    #[test]
    fn hw_examples() {
        let h = Hypergraph::from_edges(vec![set(&[0, 1, 2])]).unwrap();
        let (w, dec) = exact_hw(&h, 3, WidthLimits::default()).unwrap().unwrap();
        assert_eq!(w, 1);
        assert!(validate_hd(&h, &dec).valid);

        let digon = Digraph::bidirect(2, [(0, 1)]).unwrap();
        assert_eq!(exact_hw(&dual_cycles(&digon), 3, WidthLimits::default()).unwrap().unwrap().0, 1);

        let b3 = dual_cycles(&Digraph::bidirect(3, [(0, 1), (1, 2), (2, 0)]).unwrap());
        let (w, dec) = exact_hw(&b3, 3, WidthLimits::default()).unwrap().unwrap();
        assert_eq!(w, 2);
        assert!(validate_hd(&b3, &dec).valid);
        assert!(exact_hw(&b3, 1, WidthLimits::default()).unwrap().is_none());
    }

    #[test]
    fn triangle_widths() {
        let h = Hypergraph::from_edges(vec![set(&[0, 1]), set(&[1, 2]), set(&[0, 2])]).unwrap();
        assert_eq!(exact_hw(&h, 3, WidthLimits::default()).unwrap().unwrap().0, 2);
        let (g, dec) = exact_ghw(&h, WidthLimits::default()).unwrap();
        assert_eq!(g, 2);
        assert!(validate_ghd(&h, &dec).valid);
        let (b, tree) = exact_hbw(&h, WidthLimits::default()).unwrap();
        assert!(b <= g);
        tree.check(3).unwrap();
    }

    #[test]
    fn tree_counts() {
        // (2m-5)!! cubic trees on m labelled leaves
        for (m, count) in [(3, 1), (4, 3), (5, 15), (6, 105)] {
            let mut seen = 0;
            grow(m, 3, vec![(0, m), (1, m), (2, m)], m + 1, &mut |_| seen += 1);
            assert_eq!(seen, count);
        }
    }

    #[test]
    fn edge_cover() {
        let h = Hypergraph::from_edges(vec![set(&[0, 1]), set(&[1, 2]), set(&[0, 2]), set(&[2, 3])]).unwrap();
        assert_eq!(min_edge_cover(&h, &set(&[0, 1, 2])), Some([0, 1].into()));
        assert_eq!(min_edge_cover(&h, &set(&[])), Some(BTreeSet::new()));
    }
}
