//! Directed tree decompositions.

use super::Report;
use crate::digraph::Digraph;
use crate::vset::VertexSet;

/// Arborescence given by parent pointers, with a bag per node and a guard
/// per arc. `guards[t]` guards the arc from `parent[t]` to `t` and is empty
/// at the root.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Dtd {
    pub parent: Vec<Option<usize>>,
    pub bags: Vec<VertexSet>,
    pub guards: Vec<VertexSet>,
}

impl Dtd {
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn root(&self) -> Option<usize> {
        self.parent.iter().position(Option::is_none)
    }

    pub fn children(&self, t: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.parent[c] == Some(t)).collect()
    }

    pub fn subtree(&self, t: usize) -> Vec<usize> {
        let mut out = vec![t];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.children(out[i]));
            i += 1;
        }
        out
    }

    /// Union of the bags in the subtree rooted at `t`.
    pub fn below(&self, t: usize) -> VertexSet {
        self.subtree(t).iter().flat_map(|&s| self.bags[s].iter().copied()).collect()
    }

    /// `Γ(t)`: the bag together with the guards on all incident arcs.
    pub fn gamma(&self, t: usize) -> VertexSet {
        let mut g = self.bags[t].clone();
        g.extend(self.guards[t].iter().copied());
        for c in self.children(t) {
            g.extend(self.guards[c].iter().copied());
        }
        g
    }

    pub fn width(&self) -> usize {
        (0..self.len()).map(|t| self.gamma(t).len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// The arcs `(parent, child)` in order of the child.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).filter_map(|t| self.parent[t].map(|p| (p, t))).collect()
    }

    fn shape_violations(&self) -> Vec<String> {
        let n = self.len();
        let mut out = Vec::new();
        if self.parent.len() != n || self.guards.len() != n {
            out.push("bags, guards and parents differ in length".into());
            return out;
        }
        if n == 0 {
            out.push("no nodes".into());
            return out;
        }
        let roots = self.parent.iter().filter(|p| p.is_none()).count();
        if roots != 1 {
            out.push(format!("{roots} roots"));
            return out;
        }
        if self.parent.iter().flatten().any(|&p| p >= n) {
            out.push("parent out of range".into());
            return out;
        }
        if self.subtree(self.root().unwrap()).len() != n {
            out.push("parent pointers contain a cycle".into());
        }
        out
    }
}

/// Checks the arborescence, the partition of `V(D)` by the bags, and the guard
/// condition in its reachability form: with `S = β(T_t)` and `G = γ(d,t)`, no
/// vertex outside `S` is both reachable from and reaching `S ∖ G` in `D − G`.
pub fn validate_dtd(d: &Digraph, dec: &Dtd) -> Report {
    let mut violations = dec.shape_violations();
    if !violations.is_empty() {
        return Report::from(0, violations);
    }
    let mut owner = vec![None; d.n()];
    for (t, bag) in dec.bags.iter().enumerate() {
        for &v in bag {
            if v >= d.n() {
                violations.push(format!("bag {t} holds unknown vertex {v}"));
            } else if let Some(o) = owner[v] {
                violations.push(format!("vertex {v} in bags {o} and {t}"));
            } else {
                owner[v] = Some(t);
            }
        }
    }
    for (v, o) in owner.iter().enumerate() {
        if o.is_none() {
            violations.push(format!("vertex {v} in no bag"));
        }
    }
    for (t, g) in dec.guards.iter().enumerate() {
        if let Some(v) = g.iter().find(|&&v| v >= d.n()) {
            violations.push(format!("guard of arc into {t} holds unknown vertex {v}"));
        }
    }
    if !violations.is_empty() {
        return Report::from(0, violations);
    }
    for (p, t) in dec.arcs() {
        if let Some(x) = guard_leak(d, &dec.below(t), &dec.guards[t]) {
            violations.push(format!("arc ({p},{t}): vertex {x} lies on an unguarded returning walk"));
        }
    }
    Report::from(dec.width(), violations)
}

/// A vertex outside `s` on a walk that leaves and re-enters `s` avoiding
/// `guard`, if there is one.
pub fn guard_leak(d: &Digraph, s: &VertexSet, guard: &VertexSet) -> Option<usize> {
    let start: VertexSet = s.difference(guard).copied().collect();
    let fwd = d.reach(&start, guard);
    let bwd = d.co_reach(&start, guard);
    fwd.intersection(&bwd).copied().find(|v| !s.contains(v))
}

/// Empty internal bags, distinct singleton leaf bags, and a subcubic tree.
pub fn is_leaf_dtd(dec: &Dtd) -> bool {
    let n = dec.len();
    (0..n).all(|t| {
        let kids = dec.children(t).len();
        let degree = kids + usize::from(dec.parent[t].is_some());
        let leaf = degree <= 1;
        degree <= 3 && if leaf { dec.bags[t].len() == 1 } else { dec.bags[t].is_empty() }
    })
}

/// Leaf decomposition of no larger width. Each bag vertex of a node gets a
/// leaf of its own hanging below the node with guard `Γ(t)`; empty leaves are
/// pruned; a root with one child is dropped; a node with too many children
/// is split into a chain whose new arcs are guarded by `Γ(t)`. Children are
/// split off so that the one removed has no path to the remaining ones in
/// `D − Γ(t)`, lowest bag minimum first. Decompositions already in leaf form
/// are returned unchanged.
pub fn dtd_to_leaf_dtd(d: &Digraph, dec: &Dtd) -> Dtd {
    if is_leaf_dtd(dec) {
        return dec.clone();
    }
    let root = dec.root().expect("validated decomposition has a root");
    let mut out = Dtd::default();
    build(d, dec, root, None, VertexSet::new(), &mut out);
    // drop a root with a single child, repeatedly
    loop {
        let r = out.root().unwrap();
        let kids = out.children(r);
        if kids.len() == 1 && out.bags[r].is_empty() {
            out = remove_node(&out, r, kids[0]);
        } else {
            break;
        }
    }
    out
}

/// A group of children under one node: its new subtree root and its vertices.
struct Group {
    node: usize,
    verts: VertexSet,
}

fn add(out: &mut Dtd, parent: Option<usize>, bag: VertexSet, guard: VertexSet) -> usize {
    out.parent.push(parent);
    out.bags.push(bag);
    out.guards.push(guard);
    out.bags.len() - 1
}

/// Builds the leaf form of the subtree at `t`, attached below `parent`.
/// Returns the new node, or `None` when the subtree holds no vertex.
fn build(d: &Digraph, dec: &Dtd, t: usize, parent: Option<usize>, guard: VertexSet, out: &mut Dtd) -> Option<usize> {
    if dec.below(t).is_empty() {
        return None;
    }
    let kids = dec.children(t);
    if kids.is_empty() && dec.bags[t].len() == 1 {
        return Some(add(out, parent, dec.bags[t].clone(), guard));
    }
    let gamma = dec.gamma(t);
    let me = add(out, parent, VertexSet::new(), guard);
    let mut groups = Vec::new();
    for &v in &dec.bags[t] {
        let node = add(out, Some(me), [v].into(), gamma.clone());
        groups.push(Group { node, verts: [v].into() });
    }
    for c in kids {
        if let Some(node) = build(d, dec, c, Some(me), dec.guards[c].clone(), out) {
            groups.push(Group { node, verts: dec.below(c) });
        }
    }
    let cap = if parent.is_none() { 3 } else { 2 };
    if groups.len() > cap {
        chain(d, &gamma, me, groups, out);
    }
    Some(me)
}

/// Splits the children of `me` into a chain of binary nodes.
fn chain(d: &Digraph, gamma: &VertexSet, me: usize, mut groups: Vec<Group>, out: &mut Dtd) {
    groups.sort_by_key(|g| *g.verts.iter().next().unwrap());
    let mut cur = me;
    while groups.len() > 2 {
        let pick = (0..groups.len())
            .find(|&i| {
                let rest: VertexSet =
                    groups.iter().enumerate().filter(|(j, _)| *j != i).flat_map(|(_, g)| g.verts.iter().copied()).collect();
                d.reach(&groups[i].verts, gamma).is_disjoint(&rest)
            })
            .unwrap_or(0);
        let g = groups.remove(pick);
        out.parent[g.node] = Some(cur);
        cur = add(out, Some(cur), VertexSet::new(), gamma.clone());
    }
    for g in groups {
        out.parent[g.node] = Some(cur);
    }
}

/// Removes the root `r`, making its only child `c` the new root.
fn remove_node(dec: &Dtd, r: usize, c: usize) -> Dtd {
    let keep: Vec<usize> = (0..dec.len()).filter(|&t| t != r).collect();
    let mut index = vec![usize::MAX; dec.len()];
    for (i, &t) in keep.iter().enumerate() {
        index[t] = i;
    }
    let mut out = Dtd::default();
    for &t in &keep {
        let parent = if t == c { None } else { dec.parent[t].map(|p| index[p]) };
        let guard = if t == c { VertexSet::new() } else { dec.guards[t].clone() };
        add(&mut out, parent, dec.bags[t].clone(), guard);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn dicycle3() -> Digraph {
        Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn single_bag_digon() {
        let d = Digraph::bidirect(2, [(0, 1)]).unwrap();
        let dec = Dtd { parent: vec![None], bags: vec![set(&[0, 1])], guards: vec![set(&[])] };
        let r = validate_dtd(&d, &dec);
        assert!(r.valid);
        assert_eq!(r.width, 1);
        let leaf = dtd_to_leaf_dtd(&d, &dec);
        assert!(is_leaf_dtd(&leaf));
        assert_eq!(leaf.len(), 3);
        assert_eq!(leaf.guards[1], set(&[0, 1]));
        assert_eq!(leaf.guards[2], set(&[0, 1]));
        let r = validate_dtd(&d, &leaf);
        assert!(r.valid, "{:?}", r.violations);
        assert_eq!(r.width, 1);
    }

    #[test]
    fn guarded_cycle() {
        let d = dicycle3();
        let good = Dtd { parent: vec![None, Some(0)], bags: vec![set(&[0, 1]), set(&[2])], guards: vec![set(&[]), set(&[0])] };
        let r = validate_dtd(&d, &good);
        assert!(r.valid, "{:?}", r.violations);
        assert_eq!(r.width, 1);
        let bad = Dtd { guards: vec![set(&[]), set(&[])], ..good.clone() };
        assert!(!validate_dtd(&d, &bad).valid);
        let leaf = dtd_to_leaf_dtd(&d, &good);
        assert!(is_leaf_dtd(&leaf));
        let r = validate_dtd(&d, &leaf);
        assert!(r.valid, "{:?}", r.violations);
        assert_eq!(r.width, 1);
    }

    #[test]
    fn leaf_form_is_kept() {
        let d = dicycle3();
        let dec = Dtd {
            parent: vec![None, Some(0), Some(0), Some(0)],
            bags: vec![set(&[]), set(&[0]), set(&[1]), set(&[2])],
            guards: vec![set(&[]), set(&[0]), set(&[1]), set(&[2])],
        };
        assert!(validate_dtd(&d, &dec).valid);
        assert!(is_leaf_dtd(&dec));
        assert_eq!(dtd_to_leaf_dtd(&d, &dec), dec);
    }

    #[test]
    fn wide_bags_are_binarised() {
        // bidirected star with centre 0 and five leaves in one bag
        let d = Digraph::bidirect(6, (1..6).map(|i| (0, i))).unwrap();
        let dec = Dtd { parent: vec![None], bags: vec![d.vertices()], guards: vec![set(&[])] };
        let leaf = dtd_to_leaf_dtd(&d, &dec);
        assert!(is_leaf_dtd(&leaf));
        let r = validate_dtd(&d, &leaf);
        assert!(r.valid, "{:?}", r.violations);
        assert!(r.width <= 5);
    }

    #[test]
    fn structural_violations() {
        let d = dicycle3();
        let two_roots = Dtd { parent: vec![None, None], bags: vec![set(&[0, 1]), set(&[2])], guards: vec![set(&[]), set(&[])] };
        assert!(!validate_dtd(&d, &two_roots).valid);
        let overlap = Dtd { parent: vec![None, Some(0)], bags: vec![set(&[0, 1]), set(&[1, 2])], guards: vec![set(&[]), set(&[0])] };
        assert!(!validate_dtd(&d, &overlap).valid);
        let missing = Dtd { parent: vec![None], bags: vec![set(&[0, 1])], guards: vec![set(&[])] };
        assert!(!validate_dtd(&d, &missing).valid);
    }
}
