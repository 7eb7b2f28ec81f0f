//! Recognition of strongly connected digraphs of directed treewidth one.
//!
//! YES answers carry a width-one directed tree decomposition read off the
//! decomposition into dibraces. NO answers carry a butterfly-minor script
//! from the input to a bicycle or `A4`, and an order-3 haven.

pub mod extract;
pub mod minor;
pub mod sdecomp;

use log::info;
use thiserror::Error;

use crate::cycles::{cycle_hypergraph, CycleChain, CycleError};
use crate::decomp::{validate_dtd, Dtd};
use crate::digraph::Digraph;
use crate::games::{haven_of_order_three, verify_haven, Haven};
use crate::hypergraph::{hypertree_witness, JoinTreeWitness};
use crate::vset::VertexSet;

pub use extract::{exhaustive_search, extract_from, Extraction};
pub use minor::{contract_shore_steps, replay, Minor, MinorStep, Pattern};
pub use sdecomp::{s_decomposition, Piece, SDecomposition, SEdge, SplitOrder};

/// Number of closed chains tried when looking for a haven.
pub const CHAIN_LIMIT: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Dtw1Error {
    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("digraph has fewer than two vertices")]
    Trivial,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no forbidden minor found: {0}")]
    NoWitness(String),
    #[error("no closed chain yields a haven of order 3")]
    NoHaven,
    #[error(transparent)]
    Cycles(#[from] CycleError),
}

/// A forbidden butterfly minor and the haven it forces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoWitness {
    pub pattern: Pattern,
    pub script: Vec<MinorStep>,
    /// Branch set of every pattern vertex, in pattern order.
    pub branch_sets: Vec<VertexSet>,
    pub chain: CycleChain,
    pub haven: Haven,
    pub fallback_used: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Yes(Dtd),
    No(NoWitness),
}

impl Certificate {
    pub fn is_yes(&self) -> bool {
        matches!(self, Certificate::Yes(_))
    }
}

fn check_input(d: &Digraph) -> Result<(), Dtw1Error> {
    if d.n() < 2 {
        return Err(Dtw1Error::Trivial);
    }
    if !d.is_strongly_connected() {
        return Err(Dtw1Error::NotStronglyConnected);
    }
    Ok(())
}

/// Width-one decomposition on the tree of a decomposition whose pieces all
/// have two vertices. Rooted at the first leaf; every vertex sits at the node
/// nearest the root whose piece holds it, and each arc is guarded by the cut
/// vertex of its separation.
pub fn dtd_from_sdecomposition(s: &SDecomposition) -> Dtd {
    let k = s.pieces.len();
    let root = (0..k).find(|&t| s.neighbours(t).len() <= 1).unwrap_or(0);
    let mut parent = vec![None; k];
    let mut guards = vec![VertexSet::new(); k];
    let mut order = vec![root];
    let mut seen = vec![false; k];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let t = order[head];
        head += 1;
        for (e, u) in s.neighbours(t) {
            if !seen[u] {
                seen[u] = true;
                parent[u] = Some(t);
                guards[u] = [s.edges[e].cut].into();
                order.push(u);
            }
        }
    }
    let mut placed = VertexSet::new();
    let mut bags = vec![VertexSet::new(); k];
    for &t in &order {
        for &v in &s.pieces[t].vertices {
            if placed.insert(v) {
                bags[t].insert(v);
            }
        }
    }
    Dtd { parent, bags, guards }
}

/// Replays the tight-separation contractions leading from `d` to the
/// dibrace of node `t`.
pub fn lift_to_dibrace(d: &Digraph, s: &SDecomposition, t: usize) -> Result<Minor, String> {
    let mut m = Minor::new(d);
    for (e, u) in s.neighbours(t) {
        let se = &s.edges[e];
        // the neighbour's side is the A shore iff the neighbour is `a`
        let in_closed = se.a == u;
        contract_shore_steps(&mut m, &s.zeta(u, e), se.cut, in_closed)?;
    }
    Ok(m)
}

/// Runs the case analysis on `d` itself, which must be strongly connected
/// with a butterfly-dominating vertex and at least three vertices.
pub fn extract_minor_witness(d: &Digraph) -> Result<Extraction, Dtw1Error> {
    check_input(d)?;
    if d.n() < 3 || d.butterfly_dominating_vertices().is_empty() {
        return Err(Dtw1Error::Precondition("needs three vertices and a butterfly-dominating vertex".into()));
    }
    extract_from(Minor::new(d)).map_err(Dtw1Error::NoWitness)
}

/// Decides whether `d` has directed treewidth one and returns a certificate.
pub fn recognize_dtw1(d: &Digraph, cap: usize) -> Result<Certificate, Dtw1Error> {
    recognize_with_order(d, cap, SplitOrder::SmallestCut)
}

pub fn recognize_with_order(d: &Digraph, cap: usize, order: SplitOrder) -> Result<Certificate, Dtw1Error> {
    check_input(d)?;
    let s = s_decomposition(d, order);
    if s.is_yes_shape() {
        return Ok(Certificate::Yes(dtd_from_sdecomposition(&s)));
    }
    let t = (0..s.pieces.len()).find(|&t| s.pieces[t].vertices.len() >= 3).unwrap();
    let start = lift_to_dibrace(d, &s, t).map_err(Dtw1Error::NoWitness)?;
    let ex = extract_from(start).map_err(Dtw1Error::NoWitness)?;
    if ex.fallback_used {
        info!("fallback search used on a dibrace with {} vertices", s.pieces[t].vertices.len());
    }
    let branch_sets = ex.map.iter().map(|&i| ex.minor.branch[i].clone()).collect();
    let ch = cycle_hypergraph(d, cap)?;
    let (chain, haven) = haven_of_order_three(d, &ch, CHAIN_LIMIT).ok_or(Dtw1Error::NoHaven)?;
    Ok(Certificate::No(NoWitness {
        pattern: ex.pattern,
        script: ex.minor.script,
        branch_sets,
        chain,
        haven,
        fallback_used: ex.fallback_used,
    }))
}

/// Re-checks a certificate against `d` without enumerating cycles.
pub fn verify_certificate(d: &Digraph, cert: &Certificate) -> Result<(), String> {
    check_input(d).map_err(|e| e.to_string())?;
    match cert {
        Certificate::Yes(dtd) => {
            let r = validate_dtd(d, dtd);
            if !r.valid {
                return Err(format!("decomposition invalid: {}", r.violations.join("; ")));
            }
            if r.width > 1 {
                return Err(format!("decomposition has width {}", r.width));
            }
            Ok(())
        }
        Certificate::No(w) => {
            let m = replay(d, &w.script)?;
            let map: Vec<usize> = w
                .branch_sets
                .iter()
                .map(|b| m.branch.iter().position(|x| x == b).ok_or_else(|| format!("no branch set {b:?} after replay")))
                .collect::<Result<_, _>>()?;
            if !w.pattern.is_isomorphism(&m.g, &map) {
                return Err(format!("replayed minor is not {}", w.pattern));
            }
            if w.haven.order != 3 || !verify_haven(d, &w.haven) {
                return Err("haven of order 3 does not verify".into());
            }
            Ok(())
        }
    }
}

/// Result of the hypertree route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypertreeRoute {
    pub is_hypertree: bool,
    pub witness: Option<JoinTreeWitness>,
    pub dtd: Option<Dtd>,
    /// The witness tree gave no valid decomposition from any leaf and the
    /// host tree was rebuilt from the dibrace decomposition.
    pub rebuilt_host: bool,
}

/// Width-one decomposition from a host tree of the cycle hypergraph: rooted
/// at `root`, bag `{t}` at node `t`, arc `(p, t)` guarded by `{p}`.
pub fn dtd_from_host_tree(n: usize, tree_edges: &[(usize, usize)], root: usize) -> Dtd {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in tree_edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![None; n];
    let mut guards = vec![VertexSet::new(); n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                guards[w] = [u].into();
                stack.push(w);
            }
        }
    }
    let bags = (0..n).map(|v| [v].into()).collect();
    Dtd { parent, bags, guards }
}

/// The host-tree decomposition rooted at the first leaf for which it
/// validates at width one. Host trees only control cycles, while guards
/// must stop every returning walk, so not every host tree and leaf works.
fn host_tree_dtd(d: &Digraph, tree_edges: &[(usize, usize)]) -> Option<Dtd> {
    let n = d.n();
    let mut degree = vec![0; n];
    for &(a, b) in tree_edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    (0..n).filter(|&v| degree[v] <= 1).find_map(|root| {
        let dtd = dtd_from_host_tree(n, tree_edges, root);
        let r = validate_dtd(d, &dtd);
        (r.valid && r.width <= 1).then_some(dtd)
    })
}

/// Decides whether the cycle hypergraph of `d` is a hypertree and, if so,
/// builds the corresponding width-one decomposition. When the witness tree
/// fails, the host tree whose edges are the two-vertex dibraces is used.
pub fn hypertree_route(d: &Digraph, cap: usize) -> Result<HypertreeRoute, Dtw1Error> {
    check_input(d)?;
    let ch = cycle_hypergraph(d, cap)?;
    let h = ch.hypergraph();
    let Some(witness) = hypertree_witness(&h) else {
        return Ok(HypertreeRoute { is_hypertree: false, witness: None, dtd: None, rebuilt_host: false });
    };
    if let Some(dtd) = host_tree_dtd(d, &witness.tree_edges) {
        return Ok(HypertreeRoute { is_hypertree: true, witness: Some(witness), dtd: Some(dtd), rebuilt_host: false });
    }
    let s = s_decomposition(d, SplitOrder::SmallestCut);
    let rebuilt = s.is_yes_shape().then(|| JoinTreeWitness {
        vertices: d.vertices(),
        tree_edges: s.pieces.iter().map(|p| (*p.vertices.first().unwrap(), *p.vertices.last().unwrap())).collect(),
    });
    match rebuilt.filter(|w| w.verify(&h)) {
        Some(w) => {
            let dtd = host_tree_dtd(d, &w.tree_edges);
            Ok(HypertreeRoute { is_hypertree: true, witness: Some(w), dtd, rebuilt_host: true })
        }
        None => Ok(HypertreeRoute { is_hypertree: true, witness: Some(witness), dtd: None, rebuilt_host: true }),
    }
}

/// For a YES certificate, checks that the cycle hypergraph is a hypertree.
pub fn dtw1_implies_hypertree_check(d: &Digraph, cert: &Certificate, cap: usize) -> Result<bool, Dtw1Error> {
    if !cert.is_yes() {
        return Err(Dtw1Error::Precondition("certificate is not a YES certificate".into()));
    }
    let h = cycle_hypergraph(d, cap)?.hypergraph();
    Ok(hypertree_witness(&h).is_some_and(|w| w.verify(&h)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtw1::minor::{a4, bicycle};
    use crate::games::solve_game;

    fn dicycle(n: usize) -> Digraph {
        Digraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn bipath(n: usize) -> Digraph {
        Digraph::bidirect(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn yes_instances() {
        for d in [bipath(2), dicycle(3), bipath(4), Digraph::bidirect(5, [(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap()] {
            let cert = recognize_dtw1(&d, 1000).unwrap();
            assert!(cert.is_yes());
            verify_certificate(&d, &cert).unwrap();
            assert!(dtw1_implies_hypertree_check(&d, &cert, 1000).unwrap());
            let route = hypertree_route(&d, 1000).unwrap();
            assert!(route.is_hypertree);
            let r = validate_dtd(&d, route.dtd.as_ref().unwrap());
            assert!(r.valid && r.width == 1, "{:?}", r.violations);
        }
    }

    #[test]
    fn digon_single_bag() {
        let Certificate::Yes(dtd) = recognize_dtw1(&bipath(2), 1000).unwrap() else { panic!() };
        assert_eq!(dtd.bags, vec![VertexSet::from([0, 1])]);
    }

    #[test]
    fn no_instances() {
        for (d, p) in [(bicycle(3), Pattern::Bicycle(3)), (a4(), Pattern::A4)] {
            let Certificate::No(w) = recognize_dtw1(&d, 1000).unwrap() else { panic!() };
            assert_eq!(w.pattern, p);
            assert!(w.script.is_empty());
            verify_certificate(&d, &Certificate::No(w)).unwrap();
            assert!(!hypertree_route(&d, 1000).unwrap().is_hypertree);
            assert!(!solve_game(&d, 2).unwrap().cops_win);
        }
    }

    #[test]
    fn bicycle_four_replays() {
        let d = bicycle(4);
        let cert = recognize_dtw1(&d, 1000).unwrap();
        verify_certificate(&d, &cert).unwrap();
    }

    #[test]
    fn lifted_script_reaches_dibrace() {
        // bidirected triangle with a pendant digon and a directed triangle
        let d = Digraph::from_edges(6, [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2), (2, 3), (3, 2), (0, 4), (4, 5), (5, 0)]).unwrap();
        let s = s_decomposition(&d, SplitOrder::SmallestCut);
        let t = (0..s.pieces.len()).find(|&t| s.pieces[t].vertices.len() == 3).unwrap();
        let m = lift_to_dibrace(&d, &s, t).unwrap();
        assert_eq!(m.g.n(), 3);
        assert!(Pattern::recognise(&m.g).is_some());
        let cert = recognize_dtw1(&d, 1000).unwrap();
        verify_certificate(&d, &cert).unwrap();
    }

    #[test]
    fn host_tree_must_stop_walks() {
        // directed 4-cycle 0 -> 2 -> 1 -> 3 -> 0: the path 0-1-2-3 hosts its
        // only cycle but gives no valid decomposition from either leaf
        let d = Digraph::from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        let path = [(0, 1), (1, 2), (2, 3)];
        for root in [0, 3] {
            assert!(!validate_dtd(&d, &dtd_from_host_tree(4, &path, root)).valid);
        }
        assert!(host_tree_dtd(&d, &[(0, 2), (2, 1), (1, 3)]).is_some());
        let route = hypertree_route(&d, 100).unwrap();
        let r = validate_dtd(&d, route.dtd.as_ref().unwrap());
        assert!(r.valid && r.width == 1);
    }

    #[test]
    fn tampered_script_fails() {
        let d = bicycle(4);
        let Certificate::No(mut w) = recognize_dtw1(&d, 1000).unwrap() else { panic!() };
        w.script.push(MinorStep::DeleteEdge(0, 1));
        assert!(verify_certificate(&d, &Certificate::No(w)).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(recognize_dtw1(&Digraph::new(1), 10), Err(Dtw1Error::Trivial));
        let path = Digraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(recognize_dtw1(&path, 10), Err(Dtw1Error::NotStronglyConnected));
    }
}
