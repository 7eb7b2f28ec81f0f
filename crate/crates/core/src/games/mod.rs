//! The directed cops-and-robber game, solved exhaustively, together with
//! havens and linked sets.
//!
//! Move rule: after the cops announce `X'`, the robber may pick any strong
//! component of `D - X'` lying in the same strong component of
//! `D - (X ∩ X')` as her current one.

mod haven;
mod linked;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::cycles::CycleError;
use crate::decomp::Dbd;
use crate::digraph::Digraph;
use crate::vset::{for_each_combination, VertexSet};

pub use haven::{haven_from_closed_chain, haven_of_order_three, verify_haven, Haven};
pub use linked::{components_correspond, is_k_hyperlinked, is_k_linked};

/// Upper limit on the number of cop placements the solver will enumerate.
pub const MAX_COP_SETS: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("instance too large: {count} cop placements exceed {limit}")]
    InstanceTooLarge { count: usize, limit: usize },
    #[error("invalid branch decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error(transparent)]
    Cycles(#[from] CycleError),
}

/// A finite-memory cop strategy. `moves` maps the cops' memory state and the
/// robber's component to the next memory state and the next placement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopStrategy {
    pub budget: usize,
    pub initial: (usize, VertexSet),
    pub moves: BTreeMap<(usize, VertexSet), (usize, VertexSet)>,
}

/// Result of playing a strategy against every robber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub cops_win: bool,
    pub max_cops: usize,
    /// Why the cops lose, if they do.
    pub failure: Option<String>,
    /// A longest play, as (cops, robber) positions; the last robber entry is
    /// empty when she is caught.
    pub play: Vec<(VertexSet, VertexSet)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSolution {
    pub cops_win: bool,
    pub strategy: Option<CopStrategy>,
}

/// Strong components the robber may move to when the cops go from `x` to
/// `next` while she occupies `r`.
pub fn robber_moves(d: &Digraph, x: &VertexSet, r: &VertexSet, next: &VertexSet) -> Vec<VertexSet> {
    let stay: VertexSet = x.intersection(next).copied().collect();
    let Some(&v) = r.iter().next() else { return Vec::new() };
    let region = d.strong_components_without(&stay).into_iter().find(|c| c.contains(&v)).unwrap_or_default();
    let mut out: Vec<VertexSet> = d.strong_components_without(next).into_iter().filter(|c| c.is_subset(&region)).collect();
    out.sort();
    out
}

fn initial_components(d: &Digraph, x: &VertexSet) -> Vec<VertexSet> {
    let mut comps = d.strong_components_without(x);
    comps.sort();
    comps
}

fn cop_sets(n: usize, k: usize) -> Result<Vec<VertexSet>, GameError> {
    let mut count = 0usize;
    let mut binom = 1usize;
    for i in 0..=k.min(n) {
        if i > 0 {
            binom = binom.saturating_mul(n - i + 1) / i;
        }
        count = count.saturating_add(binom);
    }
    if count > MAX_COP_SETS {
        return Err(GameError::InstanceTooLarge { count, limit: MAX_COP_SETS });
    }
    let mut out = Vec::with_capacity(count);
    for size in 0..=k.min(n) {
        for_each_combination(n, size, |c| {
            out.push(c.iter().copied().collect());
            true
        });
    }
    Ok(out)
}

/// Solves the game with at most `k` cops exactly. Positions are pairs of a
/// cop placement and a robber component; the cops' winning region is the
/// least fixpoint of "some placement leaves only winning replies". The
/// returned strategy uses the placement index as memory.
pub fn solve_game(d: &Digraph, k: usize) -> Result<GameSolution, GameError> {
    let sets = cop_sets(d.n(), k)?;
    let index: HashMap<&VertexSet, usize> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let comps: Vec<Vec<VertexSet>> = sets.iter().map(|x| initial_components(d, x)).collect();

    let mut positions: Vec<(usize, VertexSet)> = Vec::new();
    let mut pos_id: HashMap<(usize, VertexSet), usize> = HashMap::new();
    for (i, cs) in comps.iter().enumerate() {
        for c in cs {
            pos_id.insert((i, c.clone()), positions.len());
            positions.push((i, c.clone()));
        }
    }
    // successors[p][j]: positions reachable when the cops announce sets[j]
    let successors: Vec<Vec<Vec<usize>>> = positions
        .iter()
        .map(|(i, r)| {
            let x = &sets[*i];
            let v = *r.iter().next().unwrap();
            (0..sets.len())
                .map(|j| {
                    let stay: VertexSet = x.intersection(&sets[j]).copied().collect();
                    let region = &comps[index[&stay]].iter().find(|c| c.contains(&v)).unwrap();
                    comps[j].iter().filter(|c| c.is_subset(region)).map(|c| pos_id[&(j, c.clone())]).collect()
                })
                .collect()
        })
        .collect();

    let mut winning: Vec<Option<usize>> = vec![None; positions.len()];
    loop {
        let mut changed = false;
        for p in 0..positions.len() {
            if winning[p].is_some() {
                continue;
            }
            let choice = (0..sets.len()).find(|&j| successors[p][j].iter().all(|&q| winning[q].is_some()));
            if let Some(j) = choice {
                winning[p] = Some(j);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let start = (0..sets.len()).find(|&i| comps[i].iter().all(|c| winning[pos_id[&(i, c.clone())]].is_some()));
    let Some(i0) = start else {
        return Ok(GameSolution { cops_win: false, strategy: None });
    };
    let moves =
        positions.iter().enumerate().filter_map(|(p, (i, r))| winning[p].map(|j| ((*i, r.clone()), (j, sets[j].clone())))).collect();
    let strategy = CopStrategy { budget: k, initial: (i0, sets[i0].clone()), moves };
    Ok(GameSolution { cops_win: true, strategy: Some(strategy) })
}

/// Least number of cops winning, or `None` if more than `k_max` are needed.
pub fn dcn_exact(d: &Digraph, k_max: usize) -> Result<Option<usize>, GameError> {
    if d.n() == 0 {
        return Ok(Some(0));
    }
    for k in 1..=k_max {
        if solve_game(d, k)?.cops_win {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

type Node = (usize, VertexSet, VertexSet);

/// Plays `strategy` against every robber reply. The cops win iff every play
/// ends with a capture: no prescribed move is missing, no play repeats a
/// position, and no placement exceeds the budget.
pub fn check_strategy(d: &Digraph, strategy: &CopStrategy) -> Outcome {
    let (s0, x0) = &strategy.initial;
    let mut max_cops = x0.len();
    let mut failure = None;
    let roots: Vec<Node> = initial_components(d, x0).into_iter().map(|r| (*s0, x0.clone(), r)).collect();

    // iterative DFS with colours: 1 = on stack, 2 = done; depth = longest play
    let mut colour: HashMap<Node, u8> = HashMap::new();
    let mut depth: HashMap<Node, usize> = HashMap::new();
    let mut best_next: HashMap<Node, Option<Node>> = HashMap::new();
    'outer: for root in &roots {
        if colour.contains_key(root) {
            continue;
        }
        let mut stack: Vec<(Node, Vec<Node>, usize)> = Vec::new();
        let kids = expand(d, strategy, root, &mut max_cops, &mut failure);
        colour.insert(root.clone(), 1);
        stack.push((root.clone(), kids, 0));
        while let Some((node, kids, i)) = stack.last_mut() {
            if failure.is_some() {
                break 'outer;
            }
            if *i < kids.len() {
                let kid = kids[*i].clone();
                *i += 1;
                match colour.get(&kid) {
                    Some(1) => {
                        failure = Some(format!("robber can return to cops={:?} robber={:?}", kid.1, kid.2));
                        break 'outer;
                    }
                    Some(_) => {}
                    None => {
                        let grand = expand(d, strategy, &kid, &mut max_cops, &mut failure);
                        colour.insert(kid.clone(), 1);
                        stack.push((kid, grand, 0));
                    }
                }
            } else {
                let node = node.clone();
                let kids = std::mem::take(kids);
                stack.pop();
                let best = kids.iter().max_by_key(|k| depth[*k]).cloned();
                depth.insert(node.clone(), best.as_ref().map_or(1, |b| depth[b] + 1));
                best_next.insert(node.clone(), best);
                colour.insert(node, 2);
            }
        }
    }
    if max_cops > strategy.budget && failure.is_none() {
        failure = Some(format!("placement of {max_cops} cops exceeds budget {}", strategy.budget));
    }
    let cops_win = failure.is_none();
    let mut play = Vec::new();
    if cops_win {
        let mut cur = roots.iter().max_by_key(|r| depth[*r]).cloned();
        while let Some(node) = cur {
            play.push((node.1.clone(), node.2.clone()));
            cur = best_next[&node].clone();
            if cur.is_none() {
                let next = &strategy.moves[&(node.0, node.2.clone())].1;
                play.push((next.clone(), VertexSet::new()));
            }
        }
        if roots.is_empty() {
            play.push((x0.clone(), VertexSet::new()));
        }
    }
    Outcome { cops_win, max_cops, failure, play }
}

fn expand(d: &Digraph, strategy: &CopStrategy, node: &Node, max_cops: &mut usize, failure: &mut Option<String>) -> Vec<Node> {
    let (s, x, r) = node;
    match strategy.moves.get(&(*s, r.clone())) {
        None => {
            *failure = Some(format!("no move prescribed for cops={x:?} robber={r:?}"));
            Vec::new()
        }
        Some((s2, x2)) => {
            *max_cops = (*max_cops).max(x2.len());
            robber_moves(d, x, r, x2).into_iter().map(|r2| (*s2, x2.clone(), r2)).collect()
        }
    }
}

/// The tree-walking strategy of a directed branch decomposition: cops sit on
/// the hitting sets around the current tree node and follow the robber into
/// the branch holding her. Memory states encode directed tree edges
/// `(previous, current)` as `previous * len + current`.
pub fn strategy_from_dbd(d: &Digraph, dec: &Dbd) -> Result<CopStrategy, GameError> {
    let tree = &dec.tree;
    tree.check(d.n()).map_err(GameError::InvalidDecomposition)?;
    let hit = |a: usize, b: usize| -> Result<&VertexSet, GameError> {
        dec.hitting
            .get(&(a.min(b), a.max(b)))
            .ok_or_else(|| GameError::InvalidDecomposition(format!("no hitting set for tree edge ({a},{b})")))
    };
    let width = dec.hitting.values().map(|s| s.len()).max().unwrap_or(0).max(1);
    let len = tree.len();
    let leaf = (0..len).find(|&t| tree.item[t].is_some()).ok_or_else(|| GameError::InvalidDecomposition("no leaves".into()))?;
    let delta = |t: usize| tree.item[t].expect("leaf");
    let mut moves = BTreeMap::new();
    let Some(&t0) = tree.adj[leaf].first() else {
        // a single vertex
        let x: VertexSet = [delta(leaf)].into();
        return Ok(CopStrategy { budget: 3 * width, initial: (usize::MAX, x), moves });
    };
    let mut x0: VertexSet = [delta(leaf)].into();
    for &t in tree.adj[t0].iter().filter(|&&t| t != leaf) {
        x0.extend(hit(t0, t)?);
    }
    if tree.item[t0].is_some() {
        x0.insert(delta(t0));
    }
    let s0 = leaf * len + t0;

    // explore reachable (state, robber) pairs
    let mut todo: Vec<(usize, VertexSet, VertexSet)> = initial_components(d, &x0).into_iter().map(|r| (s0, x0.clone(), r)).collect();
    while let Some((state, x, r)) = todo.pop() {
        if moves.contains_key(&(state, r.clone())) {
            continue;
        }
        let (prev, cur) = (state / len, state % len);
        let next = tree.adj[cur]
            .iter()
            .copied()
            .filter(|&t| t != prev)
            .find(|&t| {
                let side = tree.side(t, cur);
                r.iter().all(|v| side.contains(v))
            })
            .ok_or_else(|| GameError::InvalidDecomposition(format!("robber {r:?} spans several branches at node {cur}")))?;
        let x2: VertexSet = if tree.item[next].is_some() {
            let mut s = hit(cur, next)?.clone();
            s.insert(delta(next));
            s
        } else {
            let mut s = VertexSet::new();
            for &t in &tree.adj[next] {
                s.extend(hit(next, t)?);
            }
            s
        };
        let s2 = cur * len + next;
        for r2 in robber_moves(d, &x, &r, &x2) {
            todo.push((s2, x2.clone(), r2));
        }
        moves.insert((state, r), (s2, x2));
    }
    Ok(CopStrategy { budget: 3 * width, initial: (s0, x0), moves })
}
