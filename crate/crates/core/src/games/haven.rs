use std::collections::BTreeMap;

use super::GameError;
use crate::cycles::{CycleChain, CycleHypergraph};
use crate::digraph::Digraph;
use crate::vset::{for_each_combination, VertexSet};

/// A haven: every vertex set of size below `order` is mapped to a strong
/// component of what remains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Haven {
    pub order: usize,
    pub map: BTreeMap<VertexSet, VertexSet>,
}

fn component_of(d: &Digraph, removed: &VertexSet, v: usize) -> Option<VertexSet> {
    d.strong_components_without(removed).into_iter().find(|c| c.contains(&v))
}

/// Checks every set of fewer than `order` vertices is assigned a strong
/// component of its complement, and that `h(X) ⊆ h(Y)` whenever `Y ⊆ X`.
pub fn verify_haven(d: &Digraph, h: &Haven) -> bool {
    let n = d.n();
    let mut ok = true;
    for size in 0..h.order.min(n + 1) {
        for_each_combination(n, size, |c| {
            let x: VertexSet = c.iter().copied().collect();
            let Some(hx) = h.map.get(&x) else {
                ok = false;
                return false;
            };
            if !d.strong_components_without(&x).contains(hx) {
                ok = false;
                return false;
            }
            // every proper subset of x has already been assigned
            for sub in 0..size {
                let all_sub = for_each_combination(size, sub, |idx| {
                    let y: VertexSet = idx.iter().map(|&i| c[i]).collect();
                    h.map.get(&y).is_some_and(|hy| hx.is_subset(hy))
                });
                if !all_sub {
                    ok = false;
                    return false;
                }
            }
            true
        });
        if !ok {
            return false;
        }
    }
    h.map.keys().all(|x| x.len() < h.order && x.iter().all(|&v| v < n))
}

/// The order-3 haven of a closed chain `C_1, ..., C_l`. Sets covering no
/// chain cycle, one, or two consecutive ones go to the component holding the
/// uncovered cycles. Other two-element sets `{x, y}` go to the component of
/// the first anchor `v_i ∈ C_{i-1} ∩ C_i` outside `{x, y}` lying in both
/// `h({x})` and `h({y})`.
pub fn haven_from_closed_chain(d: &Digraph, ch: &CycleHypergraph, chain: &CycleChain) -> Result<Haven, GameError> {
    let seq = &chain.cycles;
    if !ch.is_closed_chain(seq) {
        return Err(GameError::InvalidChain(format!("{seq:?} is not a closed chain of length at least 3")));
    }
    let l = seq.len();
    let cyc = |i: usize| &ch.edges[seq[i % l]];
    let anchors: Vec<usize> = (0..l).map(|i| *cyc(i + l - 1).intersection(cyc(i)).next().expect("consecutive cycles meet")).collect();

    // component holding all uncovered chain cycles, if `s` covers at most two
    // consecutive ones
    let by_uncovered = |s: &VertexSet| -> Option<VertexSet> {
        let covered: Vec<usize> = (0..l).filter(|&i| !cyc(i).is_disjoint(s)).collect();
        let consecutive = match covered.as_slice() {
            [] | [_] => true,
            [a, b] => b - a == 1 || (*a == 0 && *b == l - 1),
            _ => false,
        };
        if !consecutive {
            return None;
        }
        let free = (0..l).find(|i| !covered.contains(i))?;
        component_of(d, s, *cyc(free).iter().next().unwrap())
    };

    let n = d.n();
    let mut map: BTreeMap<VertexSet, VertexSet> = BTreeMap::new();
    let mut missing = None;
    for size in 0..=2.min(n) {
        for_each_combination(n, size, |c| {
            let s: VertexSet = c.iter().copied().collect();
            let k = by_uncovered(&s).or_else(|| {
                let (hx, hy) = (&map[&VertexSet::from([c[0]])], &map[&VertexSet::from([c[1]])]);
                let v = anchors.iter().find(|&&v| !s.contains(&v) && hx.contains(&v) && hy.contains(&v))?;
                component_of(d, &s, *v)
            });
            match k {
                Some(k) => {
                    map.insert(s, k);
                    true
                }
                None => {
                    missing = Some(s);
                    false
                }
            }
        });
    }
    if let Some(s) = missing {
        return Err(GameError::InvalidChain(format!("no anchor available for {s:?}")));
    }
    Ok(Haven { order: 3, map })
}

/// Tries closed chains in order until one yields a verified haven.
pub fn haven_of_order_three(d: &Digraph, ch: &CycleHypergraph, limit: usize) -> Option<(CycleChain, Haven)> {
    ch.closed_chains(limit).into_iter().find_map(|chain| {
        let h = haven_from_closed_chain(d, ch, &chain).ok()?;
        verify_haven(d, &h).then_some((chain, h))
    })
}
