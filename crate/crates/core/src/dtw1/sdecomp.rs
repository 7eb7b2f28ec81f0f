//! Decomposition of a strongly connected digraph along a maximal laminar
//! family of non-trivial tight separations into dibraces.
//!
//! Built by splitting: while some piece has a non-trivial tight separation,
//! replace it by its two shore contractions. Tight separations of a piece
//! lift to separations of the input laminar with every earlier one, and the
//! process stops exactly when every piece is strongly 2-connected, so the
//! lifted family is maximal.

use crate::digraph::{canonical_tight_separation, contract_shore, Digraph, DirectedSeparation, Shore};
use crate::vset::VertexSet;

/// Which cut vertex a piece is split at first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitOrder {
    SmallestCut,
    LargestCut,
}

/// A node of the decomposition tree: its vertex set `B_t` and its dibrace.
/// Vertex `i` of `dibrace` is the `i`-th smallest vertex of `vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub vertices: VertexSet,
    pub dibrace: Digraph,
}

/// A tree edge: `a` lies on the `A` side of its separation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SEdge {
    pub a: usize,
    pub b: usize,
    pub cut: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SDecomposition {
    pub pieces: Vec<Piece>,
    pub edges: Vec<SEdge>,
}

impl SDecomposition {
    pub fn neighbours(&self, t: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(e, se)| match (se.a == t, se.b == t) {
                (true, _) => Some((e, se.b)),
                (_, true) => Some((e, se.a)),
                _ => None,
            })
            .collect()
    }

    /// Nodes on `t`'s side of tree edge `e`.
    fn side(&self, t: usize, e: usize) -> Vec<usize> {
        let mut seen = vec![false; self.pieces.len()];
        seen[t] = true;
        let mut stack = vec![t];
        while let Some(u) = stack.pop() {
            for (f, w) in self.neighbours(u) {
                if f != e && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..self.pieces.len()).filter(|&u| seen[u]).collect()
    }

    /// `ζ(t, e)`: the shore of `σ(e)` on `t`'s side.
    pub fn zeta(&self, t: usize, e: usize) -> VertexSet {
        self.side(t, e).into_iter().flat_map(|u| self.pieces[u].vertices.iter().copied()).collect()
    }

    /// `σ(e)` as a separation of the input digraph.
    pub fn sigma(&self, e: usize) -> DirectedSeparation {
        let se = &self.edges[e];
        DirectedSeparation::new(self.zeta(se.a, e), self.zeta(se.b, e))
    }

    /// The dibrace of `t` recomputed from `d` by contracting `ζ(s, st)` into
    /// the cut vertex for every neighbour `s`.
    pub fn contracted_dibrace(&self, d: &Digraph, t: usize) -> Digraph {
        let verts: Vec<usize> = self.pieces[t].vertices.iter().copied().collect();
        let mut class = vec![usize::MAX; d.n()];
        for (i, &v) in verts.iter().enumerate() {
            class[v] = i;
        }
        for (e, s) in self.neighbours(t) {
            let cut = verts.iter().position(|&v| v == self.edges[e].cut).unwrap();
            for v in self.zeta(s, e) {
                if class[v] == usize::MAX {
                    class[v] = cut;
                }
            }
        }
        d.quotient(&class, verts.len())
    }

    pub fn is_yes_shape(&self) -> bool {
        self.pieces.iter().all(|p| p.vertices.len() == 2)
    }
}

struct Work {
    g: Digraph,
    labels: Vec<usize>,
}

/// Splits `d` into dibraces. `d` must be strongly connected.
pub fn s_decomposition(d: &Digraph, order: SplitOrder) -> SDecomposition {
    let mut work: Vec<Work> = vec![Work { g: d.clone(), labels: (0..d.n()).collect() }];
    let mut edges: Vec<SEdge> = Vec::new();
    let mut done = vec![false];
    while let Some(p) = (0..work.len()).find(|&p| !done[p]) {
        let n = work[p].g.n();
        let candidates: Box<dyn Iterator<Item = usize>> = match order {
            SplitOrder::SmallestCut => Box::new(0..n),
            SplitOrder::LargestCut => Box::new((0..n).rev()),
        };
        let mut split = None;
        for v in candidates {
            if let Some(ts) = canonical_tight_separation(&work[p].g, v) {
                split = Some(ts);
                break;
            }
        }
        let Some(ts) = split else {
            done[p] = true;
            continue;
        };
        let labels = work[p].labels.clone();
        let lift = |set: &VertexSet| -> VertexSet { set.iter().map(|&i| labels[i]).collect() };
        let a_only = lift(&ts.sep.a.difference(&ts.sep.b).copied().collect());
        let cut = labels[ts.cut];
        let mut pieces = Vec::new();
        for contracted in [Shore::B, Shore::A] {
            let (g, map) = contract_shore(&work[p].g, &ts, contracted).unwrap();
            let mut new_labels = vec![0; g.n()];
            for (old, &new) in map.iter().enumerate() {
                if !ts.shore(contracted).contains(&old) || old == ts.cut {
                    new_labels[new] = labels[old];
                }
            }
            pieces.push(Work { g, labels: new_labels });
        }
        // piece p keeps the A side, a new piece holds the B side
        let q = work.len();
        let [keep_a, keep_b]: [Work; 2] = pieces.try_into().ok().unwrap();
        work[p] = keep_a;
        work.push(keep_b);
        done.push(false);
        // An earlier edge at the same cut vertex follows its far shore: an
        // `A` shore has no edges coming in and must stay on the `A` side, a
        // `B` shore has no edges going out and must go to the `B` side.
        for se in edges.iter_mut() {
            let far_is_b = se.a == p;
            for end in [&mut se.a, &mut se.b] {
                let to_b = if se.cut == cut { far_is_b } else { !a_only.contains(&se.cut) };
                if *end == p && to_b {
                    *end = q;
                }
            }
        }
        edges.push(SEdge { a: p, b: q, cut });
    }
    let pieces = work
        .into_iter()
        .map(|w| {
            let mut idx: Vec<usize> = (0..w.labels.len()).collect();
            idx.sort_by_key(|&i| w.labels[i]);
            let mut pos = vec![0; idx.len()];
            for (new, &old) in idx.iter().enumerate() {
                pos[old] = new;
            }
            Piece { vertices: w.labels.iter().copied().collect(), dibrace: w.g.quotient(&pos, idx.len()) }
        })
        .collect();
    SDecomposition { pieces, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bipath(n: usize) -> Digraph {
        Digraph::bidirect(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn check(d: &Digraph, s: &SDecomposition) {
        assert_eq!(s.edges.len() + 1, s.pieces.len());
        for (t, p) in s.pieces.iter().enumerate() {
            assert!(p.dibrace.is_strongly_2_connected());
            assert_eq!(s.contracted_dibrace(d, t), p.dibrace, "node {t}");
        }
        for e in 0..s.edges.len() {
            let sep = s.sigma(e);
            assert!(sep.is_valid(d), "{sep:?}");
            assert_eq!(sep.separator(), [s.edges[e].cut].into());
            for f in 0..e {
                let other = s.sigma(f);
                if s.edges[e].cut != s.edges[f].cut {
                    assert!(sep.is_laminar_with(&other), "{sep:?} crosses {other:?}");
                } else {
                    // same cut vertex: the private shores must nest or be disjoint
                    let c = s.edges[e].cut;
                    let private = |x: &VertexSet| -> VertexSet { x.iter().copied().filter(|&v| v != c).collect() };
                    let (p, q) = (private(&sep.a), private(&other.a));
                    let ok = [&p, &private(&sep.b)].iter().any(|x| {
                        [&q, &private(&other.b)].iter().any(|y| x.is_subset(y) || y.is_subset(x) || x.is_disjoint(y))
                            && [&q, &private(&other.b)].iter().all(|y| x.is_subset(y) || y.is_subset(x) || x.is_disjoint(y))
                    });
                    assert!(ok, "{sep:?} and {other:?} are not nested");
                }
            }
        }
    }

    #[test]
    fn small_examples() {
        let digon = bipath(2);
        let s = s_decomposition(&digon, SplitOrder::SmallestCut);
        assert_eq!(s.pieces.len(), 1);
        assert_eq!(s.pieces[0].dibrace, digon);

        let p3 = bipath(3);
        let s = s_decomposition(&p3, SplitOrder::SmallestCut);
        assert_eq!(s.pieces.len(), 2);
        assert_eq!(s.edges[0].cut, 1);
        assert!(s.is_yes_shape());
        check(&p3, &s);

        let b3 = Digraph::bidirect(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let s = s_decomposition(&b3, SplitOrder::SmallestCut);
        assert_eq!(s.pieces.len(), 1);
        assert_eq!(s.pieces[0].dibrace, b3);
    }

    #[test]
    fn trees_split_into_digons_either_way() {
        let star = Digraph::bidirect(5, [(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        let c3 = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        for d in [star, bipath(6), c3] {
            for order in [SplitOrder::SmallestCut, SplitOrder::LargestCut] {
                let s = s_decomposition(&d, order);
                assert!(s.is_yes_shape());
                check(&d, &s);
            }
        }
    }

    #[test]
    fn mixed_pieces() {
        // bidirected triangle 0,1,2 with a directed triangle 2,3,4 attached
        let d = Digraph::from_edges(5, [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2), (2, 3), (3, 4), (4, 2)]).unwrap();
        let s = s_decomposition(&d, SplitOrder::SmallestCut);
        check(&d, &s);
        let sizes: Vec<usize> = s.pieces.iter().map(|p| p.vertices.len()).collect();
        assert!(sizes.contains(&3));
        assert!(!s.is_yes_shape());
    }

    #[test]
    fn random_digraphs_give_valid_decompositions() {
        let mut rng = crate::generate::rng(5);
        for i in 0..300 {
            let n = 3 + i % 5;
            let d = crate::generate::random_strongly_connected(&mut rng, n, 0.3);
            for order in [SplitOrder::SmallestCut, SplitOrder::LargestCut] {
                check(&d, &s_decomposition(&d, order));
            }
        }
    }
}
