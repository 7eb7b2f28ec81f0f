//! Instance generators: seeded random digraphs and hypergraphs, exhaustive
//! enumeration of small labelled digraphs, and named families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::Digraph;
use crate::hypergraph::Hypergraph;
use crate::vset::VertexSet;

/// The deterministic generator used by every randomized suite.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each of the `n(n-1)` possible edges present independently with
/// probability `p`.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Digraph {
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                d.add_edge(u, v).unwrap();
            }
        }
    }
    d
}

/// Rejection sampling from [`random_digraph`] conditioned on strong
/// connectivity. After `1000` rejections a random Hamiltonian cycle is
/// added to the last sample instead.
pub fn random_strongly_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Digraph {
    let mut d = Digraph::new(n);
    for _ in 0..1000 {
        d = random_digraph(rng, n, p);
        if d.is_strongly_connected() {
            return d;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 0..n {
        if n > 1 {
            d.add_edge(order[i], order[(i + 1) % n]).unwrap();
        }
    }
    d
}

/// Every labelled digraph on `n` vertices, in order of the edge bitmask over
/// the ordered pairs `(u, v)`, `u != v`, listed lexicographically.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    assert!(pairs.len() < 64, "too many vertices to enumerate");
    (0u64..1 << pairs.len())
        .map(move |mask| Digraph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap())
}

pub fn all_strongly_connected(n: usize) -> Vec<Digraph> {
    all_digraphs(n).filter(Digraph::is_strongly_connected).collect()
}

/// Smallest adjacency bitmask over all relabellings; equal exactly for
/// isomorphic digraphs. Only for small `n`.
pub fn canonical_code(d: &Digraph) -> u64 {
    let n = d.n();
    assert!(n * n <= 64, "too many vertices for a canonical code");
    let edges = d.edges();
    crate::dtw1::minor::permutations(n).iter().map(|p| edges.iter().fold(0u64, |m, &(u, v)| m | 1 << (p[u] * n + p[v]))).min().unwrap_or(0)
}

/// Random hypergraph with vertices `0..n` and `m` non-empty edges. Vertices
/// missed by every edge are added to a random edge so none is isolated.
pub fn random_hypergraph<R: Rng>(rng: &mut R, n: usize, m: usize) -> Hypergraph {
    assert!(n > 0 && m > 0);
    let mut edges: Vec<VertexSet> = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=n.min(4));
            let mut vs: Vec<usize> = (0..n).collect();
            vs.shuffle(rng);
            vs.into_iter().take(size).collect()
        })
        .collect();
    for v in 0..n {
        if edges.iter().all(|e| !e.contains(&v)) {
            let i = rng.gen_range(0..m);
            edges[i].insert(v);
        }
    }
    Hypergraph::new((0..n).collect(), edges).unwrap()
}

/// Uniform random labelled tree on `n` vertices as an undirected edge list,
/// decoded from a random Prüfer sequence.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    match n {
        0 | 1 => return Vec::new(),
        2 => return vec![(0, 1)],
        _ => {}
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::new();
    for &c in &code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Replaces the chosen edges `(u, v)` by paths `u -> w -> v` through new
/// vertices.
pub fn subdivide(d: &Digraph, chosen: &[(usize, usize)]) -> Digraph {
    let mut out = Digraph::new(d.n() + chosen.len());
    let mut next = d.n();
    for (u, v) in d.edges() {
        if chosen.contains(&(u, v)) {
            out.add_edge(u, next).unwrap();
            out.add_edge(next, v).unwrap();
            next += 1;
        } else {
            out.add_edge(u, v).unwrap();
        }
    }
    out
}

/// A random bidirected tree on `n` vertices.
pub fn random_bidirected_tree<R: Rng>(rng: &mut R, n: usize) -> Digraph {
    Digraph::bidirect(n, random_tree(rng, n)).unwrap()
}

/// A random bidirected tree with each edge subdivided with probability
/// one half.
pub fn random_subdivided_bidirected_tree<R: Rng>(rng: &mut R, n: usize) -> Digraph {
    let t = random_bidirected_tree(rng, n);
    let chosen: Vec<(usize, usize)> = t.edges().into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    subdivide(&t, &chosen)
}
