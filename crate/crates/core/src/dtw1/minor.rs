//! Butterfly-minor scripts over labelled digraphs.
//!
//! Every current vertex is labelled by the smallest original vertex in its
//! branch set, and script steps name vertices by these labels.

use std::fmt;
use std::str::FromStr;

use crate::digraph::Digraph;
use crate::vset::VertexSet;

/// One step of a butterfly-minor script.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MinorStep {
    DeleteEdge(usize, usize),
    DeleteVertex(usize),
    Contract(usize, usize),
}

impl fmt::Display for MinorStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinorStep::DeleteEdge(u, v) => write!(f, "del {u} {v}"),
            MinorStep::DeleteVertex(u) => write!(f, "delv {u}"),
            MinorStep::Contract(u, v) => write!(f, "contract {u} {v}"),
        }
    }
}

impl FromStr for MinorStep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let num = |t: &str| t.parse::<usize>().map_err(|e| format!("bad vertex {t:?}: {e}"));
        match parts.as_slice() {
            ["del", u, v] => Ok(MinorStep::DeleteEdge(num(u)?, num(v)?)),
            ["delv", u] => Ok(MinorStep::DeleteVertex(num(u)?)),
            ["contract", u, v] => Ok(MinorStep::Contract(num(u)?, num(v)?)),
            _ => Err(format!("unknown step {s:?}")),
        }
    }
}

/// The forbidden patterns for directed treewidth one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    /// Bidirected cycle of the given length, at least 3.
    Bicycle(usize),
    A4,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Bicycle(l) => write!(f, "bicycle {l}"),
            Pattern::A4 => write!(f, "A4"),
        }
    }
}

impl FromStr for Pattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        match parts.as_slice() {
            ["A4"] => Ok(Pattern::A4),
            ["bicycle", l] => match l.parse::<usize>() {
                Ok(l) if l >= 3 => Ok(Pattern::Bicycle(l)),
                _ => Err(format!("bad bicycle length {l:?}")),
            },
            _ => Err(format!("unknown pattern {s:?}")),
        }
    }
}

/// The 4-cycle `0→1→2→3→0` with digons `1↔3` and `0↔2`.
pub fn a4() -> Digraph {
    Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (3, 1), (0, 2), (2, 0)]).unwrap()
}

pub fn bicycle(l: usize) -> Digraph {
    Digraph::bidirect(l, (0..l).map(|i| (i, (i + 1) % l))).unwrap()
}

impl Pattern {
    pub fn digraph(&self) -> Digraph {
        match self {
            Pattern::Bicycle(l) => bicycle(*l),
            Pattern::A4 => a4(),
        }
    }

    /// Finds a pattern `g` is isomorphic to, with the isomorphism as a map
    /// from pattern vertices to vertices of `g`.
    pub fn recognise(g: &Digraph) -> Option<(Pattern, Vec<usize>)> {
        if let Some(order) = bicycle_order(g) {
            return Some((Pattern::Bicycle(order.len()), order));
        }
        if g.n() == 4 && g.edge_count() == 8 {
            let p = a4();
            for perm in permutations(4) {
                if p.edges().iter().all(|&(a, b)| g.has_edge(perm[a], perm[b])) {
                    return Some((Pattern::A4, perm));
                }
            }
        }
        None
    }

    /// Checks that `map` (pattern vertex to vertex of `g`) is an isomorphism.
    pub fn is_isomorphism(&self, g: &Digraph, map: &[usize]) -> bool {
        let p = self.digraph();
        let distinct: VertexSet = map.iter().copied().collect();
        map.len() == p.n()
            && g.n() == p.n()
            && distinct.len() == p.n()
            && map.iter().all(|&v| v < g.n())
            && g.edge_count() == p.edge_count()
            && p.edges().iter().all(|&(a, b)| g.has_edge(map[a], map[b]))
    }
}

/// Vertices of `g` in cyclic order if `g` is a bidirected cycle of length
/// at least 3.
fn bicycle_order(g: &Digraph) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 3 || !g.is_symmetric() || (0..n).any(|v| g.out_degree(v) != 2) {
        return None;
    }
    let mut order = vec![0];
    let mut prev = 0;
    let mut cur = *g.succ(0).iter().next().unwrap();
    while cur != 0 {
        order.push(cur);
        let next = *g.succ(cur).iter().find(|&&w| w != prev).unwrap();
        prev = cur;
        cur = next;
    }
    (order.len() == n).then_some(order)
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// A butterfly minor in progress: the current digraph, the branch set of
/// every current vertex, and the script applied so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minor {
    pub g: Digraph,
    pub branch: Vec<VertexSet>,
    pub script: Vec<MinorStep>,
}

impl Minor {
    pub fn new(d: &Digraph) -> Self {
        Minor { g: d.clone(), branch: (0..d.n()).map(|v| [v].into()).collect(), script: Vec::new() }
    }

    pub fn label(&self, i: usize) -> usize {
        *self.branch[i].iter().next().unwrap()
    }

    pub fn index_of(&self, label: usize) -> Option<usize> {
        self.branch.iter().position(|b| b.iter().next() == Some(&label))
    }

    /// Current vertex whose branch set holds the original vertex `v`.
    pub fn holder(&self, v: usize) -> Option<usize> {
        self.branch.iter().position(|b| b.contains(&v))
    }

    /// Applies a step given in labels and records it.
    pub fn apply(&mut self, step: MinorStep) -> Result<(), String> {
        let idx = |m: &Minor, l: usize| m.index_of(l).ok_or_else(|| format!("{step}: no vertex labelled {l}"));
        match step {
            MinorStep::DeleteEdge(u, v) => {
                let (i, j) = (idx(self, u)?, idx(self, v)?);
                self.g.remove_edge(i, j).map_err(|e| format!("{step}: {e}"))?;
            }
            MinorStep::DeleteVertex(u) => {
                let i = idx(self, u)?;
                let keep: VertexSet = (0..self.g.n()).filter(|&x| x != i).collect();
                self.g = self.g.induced(&keep).0;
                self.branch.remove(i);
            }
            MinorStep::Contract(u, v) => {
                let (i, j) = (idx(self, u)?, idx(self, v)?);
                let (g, map) = self.g.butterfly_contract(i, j).map_err(|e| format!("{step}: {e}"))?;
                let mut branch = vec![VertexSet::new(); g.n()];
                for (old, b) in self.branch.iter().enumerate() {
                    branch[map[old]].extend(b);
                }
                self.g = g;
                self.branch = branch;
            }
        }
        self.script.push(step);
        Ok(())
    }

    pub fn delete_edge(&mut self, i: usize, j: usize) -> Result<(), String> {
        self.apply(MinorStep::DeleteEdge(self.label(i), self.label(j)))
    }

    pub fn contract(&mut self, i: usize, j: usize) -> Result<(), String> {
        self.apply(MinorStep::Contract(self.label(i), self.label(j)))
    }

    pub fn delete_vertex(&mut self, i: usize) -> Result<(), String> {
        self.apply(MinorStep::DeleteVertex(self.label(i)))
    }
}

/// Replays a script from `d`.
pub fn replay(d: &Digraph, script: &[MinorStep]) -> Result<Minor, String> {
    let mut m = Minor::new(d);
    for &s in script {
        m.apply(s)?;
    }
    Ok(m)
}

/// Identifies `shore \ {cut}` with `cut` by butterfly steps. The shore is
/// given in original vertices and must be one side of a tight separation of
/// the current digraph with no edges entering it (`Shore::A`) or leaving it
/// (`Shore::B`) other than through the cut vertex. Extra edges inside the
/// shore are deleted so that every contraction is legal: a spanning tree
/// towards the cut vertex for a `B` shore, away from it for an `A` shore,
/// collapsed from the leaves.
pub fn contract_shore_steps(m: &mut Minor, shore: &VertexSet, cut: usize, in_closed: bool) -> Result<(), String> {
    let c = m.holder(cut).ok_or("cut vertex was deleted")?;
    let members: VertexSet = shore.iter().filter_map(|&v| m.holder(v)).filter(|&i| i != c).collect();
    if members.is_empty() {
        return Ok(());
    }
    // BFS from the cut vertex inside the shore, forwards for an in-closed
    // shore and backwards otherwise
    let mut parent: std::collections::BTreeMap<usize, usize> = Default::default();
    let mut order = vec![c];
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        let next: Vec<usize> = if in_closed { m.g.succ(u).iter().copied().collect() } else { m.g.pred(u).iter().copied().collect() };
        for w in next {
            if members.contains(&w) && !parent.contains_key(&w) {
                parent.insert(w, u);
                order.push(w);
            }
        }
    }
    if parent.len() != members.len() {
        return Err("shore is not connected to its cut vertex".into());
    }
    let labels: Vec<(usize, usize)> = order[1..].iter().map(|&x| (m.label(x), m.label(parent[&x]))).collect();
    // drop every non-tree edge that would block the contractions
    for &(x, p) in &labels {
        let xi = m.index_of(x).unwrap();
        let extra: Vec<usize> = if in_closed {
            m.g.pred(xi).iter().copied().filter(|&w| m.label(w) != p).collect()
        } else {
            m.g.succ(xi).iter().copied().filter(|&w| m.label(w) != p).collect()
        };
        for w in extra {
            let xi = m.index_of(x).unwrap();
            if in_closed {
                m.delete_edge(w, xi)?;
            } else {
                m.delete_edge(xi, w)?;
            }
        }
    }
    // collapse from the deepest vertex up; labels may shrink as sets merge,
    // so look vertices up by an original member each time
    for &(x, p) in labels.iter().rev() {
        let (xi, pi) = (m.holder(x).unwrap(), m.holder(p).unwrap());
        if in_closed {
            m.contract(pi, xi)?;
        } else {
            m.contract(xi, pi)?;
        }
    }
    Ok(())
}
