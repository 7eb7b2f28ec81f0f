//! Finds a bicycle or `A4` butterfly minor in a strongly connected digraph
//! with a butterfly-dominating vertex, following the case analysis of the
//! forbidden-minor theorem step by step.

use std::collections::HashSet;

use log::{debug, warn};

use super::minor::{contract_shore_steps, permutations, Minor, Pattern};
use crate::digraph::Digraph;
use crate::vset::VertexSet;

/// Upper limit on states visited by the exhaustive fallback.
pub const FALLBACK_STATE_LIMIT: usize = 200_000;

/// Outcome of a successful extraction: the minor reached and how.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub pattern: Pattern,
    pub minor: Minor,
    /// Pattern vertex to current vertex of `minor.g`.
    pub map: Vec<usize>,
    pub fallback_used: bool,
}

// The seven small induced patterns, on vertices 0..k.
const K3_TRANS: &[(usize, usize)] = &[(1, 0), (0, 2), (1, 2)];
const K3_PLUS: &[(usize, usize)] = &[(1, 0), (0, 2), (2, 1), (1, 2)];
const K3_OUT: &[(usize, usize)] = &[(0, 1), (1, 0), (0, 2), (1, 2)];
const K3_IN: &[(usize, usize)] = &[(1, 0), (1, 2), (0, 2), (2, 0)];
const K3_PLUS_PLUS: &[(usize, usize)] = &[(1, 0), (0, 1), (1, 2), (0, 2), (2, 0)];
const K22_UP: &[(usize, usize)] = &[(1, 0), (1, 3), (2, 0), (2, 3)];

/// All maps from pattern vertices to `verts` under which the induced
/// subgraph on `verts` equals the pattern exactly.
fn embeddings(g: &Digraph, verts: &[usize], pattern: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let k = verts.len();
    let induced = verts.iter().flat_map(|&a| verts.iter().map(move |&b| (a, b))).filter(|&(a, b)| a != b && g.has_edge(a, b)).count();
    if induced != pattern.len() {
        return Vec::new();
    }
    permutations(k)
        .into_iter()
        .map(|p| p.into_iter().map(|i| verts[i]).collect::<Vec<usize>>())
        .filter(|m| pattern.iter().all(|&(a, b)| g.has_edge(m[a], m[b])))
        .collect()
}

/// Whether edge `(a, b)` lies in an induced copy of one of the seven small
/// patterns.
fn small_cycle_at(g: &Digraph, a: usize, b: usize) -> bool {
    if g.has_edge(b, a) {
        return true;
    }
    let others: Vec<usize> = (0..g.n()).filter(|&v| v != a && v != b).collect();
    let uses = |m: &Vec<usize>, pat: &[(usize, usize)]| pat.iter().any(|&(x, y)| m[x] == a && m[y] == b);
    for &c in &others {
        for pat in [K3_TRANS, K3_PLUS, K3_OUT, K3_IN, K3_PLUS_PLUS] {
            if embeddings(g, &[a, b, c], pat).iter().any(|m| uses(m, pat)) {
                return true;
            }
        }
    }
    for (i, &c) in others.iter().enumerate() {
        for &e in &others[i + 1..] {
            if embeddings(g, &[a, b, c, e], K22_UP).iter().any(|m| uses(m, K22_UP)) {
                return true;
            }
        }
    }
    false
}

/// First induced copy of `pattern` in `g`, vertices in pattern order.
fn find_induced(g: &Digraph, pattern: &[(usize, usize)], k: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let mut found = None;
    crate::vset::for_each_combination(n, k, |c| {
        if let Some(m) = embeddings(g, c, pattern).into_iter().next() {
            found = Some(m);
            return false;
        }
        true
    });
    found
}

fn first_cut_vertex(g: &Digraph) -> Option<usize> {
    (0..g.n()).find(|&v| g.strong_components_without(&[v].into()).len() > 1)
}

/// One pass of the case analysis. Returns the next dominating vertex hint
/// (an original vertex), or an error naming the failed precondition.
fn step(m: &mut Minor, hint: Option<usize>) -> Result<Option<usize>, String> {
    let g = m.g.clone();
    let n = g.n();
    if n < 4 {
        return Err(format!("{n} vertices left without reaching a pattern"));
    }
    if !g.is_strongly_connected() {
        return Err("lost strong connectivity".into());
    }
    let dominating = g.butterfly_dominating_vertices();
    let x = hint
        .and_then(|h| m.holder(h))
        .filter(|i| dominating.contains(i))
        .or_else(|| dominating.iter().next().copied())
        .ok_or("no butterfly-dominating vertex")?;

    // Case 1: a cut vertex; contract a shore away from the dominating vertex
    if let Some(v) = first_cut_vertex(&g) {
        let removed: VertexSet = [v].into();
        let comps = g.strong_components_without(&removed);
        let k = comps.iter().find(|c| v != x && c.contains(&x)).or_else(|| comps.iter().min_by_key(|c| c.iter().next())).unwrap();
        let reaching = comps.iter().any(|c| c != k && !g.reach(c, &removed).is_disjoint(k));
        let (shore, in_closed) = if reaching { (g.reach(k, &removed), false) } else { (k.clone(), true) };
        debug!("case 1: cut {v}, contracting {} vertices", shore.len());
        let to_orig = |s: &VertexSet| -> VertexSet { s.iter().map(|&i| m.label(i)).collect() };
        let mut orig = to_orig(&shore);
        let cut = m.label(v);
        orig.insert(cut);
        contract_shore_steps(m, &orig, cut, in_closed)?;
        return Ok(Some(cut));
    }

    // Case 2: a vertex of out- or in-degree at least three
    if let Some(u) = (0..n).find(|&u| g.out_degree(u) >= 3) {
        let w = *g.succ(u).iter().next().unwrap();
        debug!("case 2: deleting ({u},{w})");
        let wl = m.label(w);
        m.delete_edge(u, w)?;
        return Ok(Some(wl));
    }
    if let Some(u) = (0..n).find(|&u| g.in_degree(u) >= 3) {
        let w = *g.pred(u).iter().next().unwrap();
        debug!("case 2: deleting ({w},{u})");
        let wl = m.label(w);
        m.delete_edge(w, u)?;
        return Ok(Some(wl));
    }

    // Case 3: an edge outside every small induced pattern
    if let Some((a, b)) = g.edges().into_iter().find(|&(a, b)| !small_cycle_at(&g, a, b)) {
        let z = *g.succ(a).iter().find(|&&z| z != b).ok_or("case 3: tail has out-degree one")?;
        debug!("case 3: edge ({a},{b}), deleting ({a},{z})");
        let (al, bl, zl) = (m.label(a), m.label(b), m.label(z));
        m.delete_edge(a, z)?;
        m.contract(m.holder(al).unwrap(), m.holder(bl).unwrap())?;
        return Ok(Some(zl));
    }

    // Case 4: induced transitive triangle x→y, y→z, x→z (pattern 1,0,2)
    if let Some(t) = find_induced(&g, K3_TRANS, 3) {
        let (a, b, c) = (t[1], t[0], t[2]);
        debug!("case 4: ({a},{b},{c})");
        let (al, bl, cl) = (m.label(a), m.label(b), m.label(c));
        m.delete_edge(a, c)?;
        m.contract(m.holder(bl).unwrap(), m.holder(cl).unwrap())?;
        return Ok(Some(al));
    }

    // Case 5: induced x→y, y→z, x↔z
    if let Some(t) = find_induced(&g, K3_PLUS, 3) {
        let (a, b, c) = (t[1], t[0], t[2]);
        if n == 4 {
            return Err("case 5 on four vertices but not A4".into());
        }
        debug!("case 5: ({a},{b},{c})");
        let (al, bl, cl) = (m.label(a), m.label(b), m.label(c));
        m.delete_edge(a, c)?;
        m.delete_edge(m.holder(cl).unwrap(), m.holder(al).unwrap())?;
        m.contract(m.holder(al).unwrap(), m.holder(bl).unwrap())?;
        m.contract(m.holder(bl).unwrap(), m.holder(cl).unwrap())?;
        return Ok(None);
    }

    // Cases 6 and 7 contradict strong 2-connectivity
    for (name, pat) in [("K3o", K3_OUT), ("K3i", K3_IN), ("K3++", K3_PLUS_PLUS)] {
        if find_induced(&g, pat, 3).is_some() {
            return Err(format!("induced {name} in a strongly 2-connected digraph"));
        }
    }

    // Case 8: induced w→y, w→z, x→y, x→z (pattern sources 1,2; sinks 0,3)
    if let Some(t) = find_induced(&g, K22_UP, 4) {
        let (w, x2, y, z) = (t[1], t[2], t[0], t[3]);
        debug!("case 8: sources {w},{x2} sinks {y},{z}");
        let (wl, xl, zl) = (m.label(w), m.label(x2), m.label(z));
        m.delete_edge(w, y)?;
        m.contract(m.holder(wl).unwrap(), m.holder(zl).unwrap())?;
        return Ok(Some(xl));
    }
    Err("no case applies and the digraph is not a bicycle".into())
}

/// Runs the case analysis from `start`, falling back to exhaustive search
/// when a precondition of the analysis fails.
pub fn extract_from(start: Minor) -> Result<Extraction, String> {
    let mut m = start.clone();
    let mut hint = None;
    let failure = loop {
        if let Some((pattern, map)) = Pattern::recognise(&m.g) {
            return Ok(Extraction { pattern, minor: m, map, fallback_used: false });
        }
        match step(&mut m, hint) {
            Ok(h) => hint = h,
            Err(e) => break e,
        }
    };
    warn!("case analysis stopped ({failure}); falling back to exhaustive minor search");
    let (minor, pattern, map) = exhaustive_search(start, FALLBACK_STATE_LIMIT)
        .ok_or_else(|| format!("case analysis stopped ({failure}) and exhaustive search found no pattern"))?;
    Ok(Extraction { pattern, minor, map, fallback_used: true })
}

/// Depth-first search over strongly connected butterfly minors on at least
/// three vertices, contractions first.
pub fn exhaustive_search(start: Minor, limit: usize) -> Option<(Minor, Pattern, Vec<usize>)> {
    let mut seen: HashSet<Digraph> = HashSet::new();
    let mut stack = vec![start];
    while let Some(m) = stack.pop() {
        if !seen.insert(m.g.clone()) || seen.len() > limit {
            if seen.len() > limit {
                return None;
            }
            continue;
        }
        if let Some((p, map)) = Pattern::recognise(&m.g) {
            return Some((m, p, map));
        }
        let g = &m.g;
        let mut next = Vec::new();
        for i in 0..g.n() {
            let mut c = m.clone();
            if c.delete_vertex(i).is_ok() && c.g.n() >= 3 && c.g.is_strongly_connected() {
                next.push(c);
            }
        }
        for (a, b) in g.edges() {
            let mut c = m.clone();
            if c.delete_edge(a, b).is_ok() && c.g.is_strongly_connected() {
                next.push(c);
            }
        }
        if g.n() > 3 {
            for (a, b) in g.contractible_edges() {
                let mut c = m.clone();
                if c.contract(a, b).is_ok() {
                    next.push(c);
                }
            }
        }
        stack.extend(next);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtw1::minor::{a4, bicycle, replay};

    #[test]
    fn patterns_need_no_steps() {
        let e = extract_from(Minor::new(&bicycle(3))).unwrap();
        assert_eq!(e.pattern, Pattern::Bicycle(3));
        assert!(e.minor.script.is_empty());
        let e = extract_from(Minor::new(&a4())).unwrap();
        assert_eq!(e.pattern, Pattern::A4);
    }

    #[test]
    fn small_cycle_property_on_bicycle() {
        let g = bicycle(4);
        assert!(g.edges().iter().all(|&(a, b)| small_cycle_at(&g, a, b)));
        let c4 = Digraph::from_edges(4, (0..4).map(|i| (i, (i + 1) % 4))).unwrap();
        assert!(!small_cycle_at(&c4, 0, 1));
    }

    #[test]
    fn k4_reduces_without_fallback() {
        let k4 = Digraph::bidirect(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let e = extract_from(Minor::new(&k4)).unwrap();
        assert!(!e.fallback_used);
        let r = replay(&k4, &e.minor.script).unwrap();
        assert!(e.pattern.is_isomorphism(&r.g, &e.map));
    }

    #[test]
    fn exhaustive_search_finds_bicycle_in_wheel() {
        // bidirected 4-cycle plus a hub with edges out to every rim vertex
        let mut d = bicycle(4);
        let mut g = Digraph::new(5);
        for (a, b) in d.edges() {
            g.add_edge(a, b).unwrap();
        }
        for v in 0..4 {
            g.add_edge(4, v).unwrap();
        }
        g.add_edge(0, 4).unwrap();
        d = g;
        let (m, p, map) = exhaustive_search(Minor::new(&d), 10_000).unwrap();
        assert!(p.is_isomorphism(&m.g, &map));
        assert_eq!(replay(&d, &m.script).unwrap(), m);
    }
}
