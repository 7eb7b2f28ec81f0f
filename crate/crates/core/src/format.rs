//! Line-oriented text formats: edge lists, hypergraphs, decompositions,
//! certificates, cycle dumps and game transcripts.
//!
//! Every writer is canonical (sorted sets, nodes in index order) so equal
//! values print byte-identically. Every parser skips blank lines and `#`
//! comments and reports the 1-based line of the first problem.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cycles::{CycleChain, DirectedCycle};
use crate::decomp::{Dbd, Dtd, Hbd};
use crate::digraph::Digraph;
use crate::dtw1::{Certificate, MinorStep, NoWitness, Pattern};
use crate::games::{CopStrategy, Haven};
use crate::hypergraph::{Ghd, Hypergraph, SubcubicTree};
use crate::vset::{fmt_set, parse_set, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap().trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn is_name(tok: &str) -> bool {
    tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
}

fn num(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse().or_else(|_| err(line, format!("expected a non-negative integer, got {tok:?}")))
}

fn set(line: usize, tok: &str) -> Result<VertexSet, ParseError> {
    parse_set(tok).map_or_else(|| err(line, format!("malformed set {tok:?}")), Ok)
}

/// Value of a `key=value` token.
fn field<'a>(line: usize, tok: Option<&'a str>, key: &str) -> Result<&'a str, ParseError> {
    match tok.and_then(|t| t.strip_prefix(key)).and_then(|t| t.strip_prefix('=')) {
        Some(v) => Ok(v),
        None => err(line, format!("expected {key}=...")),
    }
}

fn no_more<'a>(line: usize, mut rest: impl Iterator<Item = &'a str>) -> Result<(), ParseError> {
    match rest.next() {
        Some(t) => err(line, format!("unexpected token {t:?}")),
        None => Ok(()),
    }
}

/// Interns names to dense ids in first-seen order.
#[derive(Default)]
struct Names {
    ids: HashMap<String, usize>,
    names: Vec<String>,
}

impl Names {
    fn id(&mut self, line: usize, tok: &str) -> Result<usize, ParseError> {
        if !is_name(tok) {
            return err(line, format!("invalid vertex name {tok:?}"));
        }
        if let Some(&i) = self.ids.get(tok) {
            return Ok(i);
        }
        self.names.push(tok.to_string());
        self.ids.insert(tok.to_string(), self.names.len() - 1);
        Ok(self.names.len() - 1)
    }
}

/// A digraph read from an edge list, with the original vertex names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedDigraph {
    pub digraph: Digraph,
    pub names: Vec<String>,
}

/// Parses `u v` lines. A line with a single name declares an isolated
/// vertex. Names map to dense ids in first-seen order; repeated edges are
/// ignored and loops are rejected.
pub fn parse_edge_list(text: &str) -> Result<NamedDigraph, ParseError> {
    let mut names = Names::default();
    let mut edges = Vec::new();
    for (line, l) in lines(text) {
        let mut toks = l.split_whitespace();
        let u = names.id(line, toks.next().unwrap())?;
        if let Some(t) = toks.next() {
            let v = names.id(line, t)?;
            if u == v {
                return err(line, format!("loop at {t}"));
            }
            no_more(line, toks)?;
            edges.push((u, v));
        }
    }
    let digraph = Digraph::from_edges(names.names.len(), edges).expect("ids are dense and loop-free");
    Ok(NamedDigraph { digraph, names: names.names })
}

/// One `u v` line per edge in sorted order. Vertex declarations come first
/// whenever the edges alone would not reproduce the ids on re-reading.
pub fn write_edge_list(d: &Digraph) -> String {
    let edges = d.edges();
    let mut seen = Vec::new();
    for &(u, v) in &edges {
        for x in [u, v] {
            if !seen.contains(&x) {
                seen.push(x);
            }
        }
    }
    let mut out = String::new();
    if seen != (0..d.n()).collect::<Vec<_>>() {
        for v in 0..d.n() {
            writeln!(out, "{v}").unwrap();
        }
    }
    for (u, v) in edges {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// SHA-256 of the vertex count and the sorted edge list, in hex.
pub fn digraph_hash(d: &Digraph) -> String {
    let mut h = Sha256::new();
    h.update(format!("n {}\n", d.n()));
    for (u, v) in d.edges() {
        h.update(format!("{u} {v}\n"));
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// A hypergraph read from text, with vertex names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedHypergraph {
    pub hypergraph: Hypergraph,
    pub names: Vec<String>,
}

/// Parses an optional `v <names...>` line followed by `e <names...>` lines.
/// Vertices first seen in an `e` line are declared implicitly.
pub fn parse_hypergraph(text: &str) -> Result<NamedHypergraph, ParseError> {
    let mut names = Names::default();
    let mut edges = Vec::new();
    for (line, l) in lines(text) {
        let mut toks = l.split_whitespace();
        match toks.next().unwrap() {
            "v" => {
                if !edges.is_empty() {
                    return err(line, "vertex line after hyperedges");
                }
                for t in toks {
                    names.id(line, t)?;
                }
            }
            "e" => {
                let e: VertexSet = toks.map(|t| names.id(line, t)).collect::<Result<_, _>>()?;
                if e.is_empty() {
                    return err(line, "empty hyperedge");
                }
                edges.push((line, e));
            }
            other => return err(line, format!("unknown record {other:?}")),
        }
    }
    let vertices: VertexSet = (0..names.names.len()).collect();
    let (lines_of, edges): (Vec<usize>, Vec<VertexSet>) = edges.into_iter().unzip();
    match Hypergraph::new(vertices, edges) {
        Ok(hypergraph) => Ok(NamedHypergraph { hypergraph, names: names.names }),
        Err(e) => err(lines_of.last().copied().unwrap_or(1), e.to_string()),
    }
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::from("v");
    for v in &h.vertices {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    for e in &h.edges {
        out.push('e');
        for v in e {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// `c v1 ... vk` per cycle, in the given order.
pub fn write_cycles(cycles: &[DirectedCycle]) -> String {
    let mut out = String::new();
    for c in cycles {
        out.push('c');
        for v in &c.0 {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_cycles(text: &str) -> Result<Vec<DirectedCycle>, ParseError> {
    let mut out = Vec::new();
    for (line, l) in lines(text) {
        let mut toks = l.split_whitespace();
        if toks.next() != Some("c") {
            return err(line, "expected a `c` record");
        }
        let seq: Vec<usize> = toks.map(|t| num(line, t)).collect::<Result<_, _>>()?;
        let distinct: BTreeSet<usize> = seq.iter().copied().collect();
        if seq.len() < 2 || distinct.len() != seq.len() {
            return err(line, "a cycle needs at least two distinct vertices");
        }
        out.push(DirectedCycle::canonical(seq));
    }
    Ok(out)
}

/// Any of the decomposition kinds of the interchange format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Dtd(Dtd),
    Dbd(Dbd),
    Hbd(Hbd),
    Ghd(Ghd),
}

fn write_rooted(out: &mut String, parent: &[Option<usize>], bags: &[VertexSet], guards: &[VertexSet], guard_on_node: bool) {
    for (t, bag) in bags.iter().enumerate() {
        write!(out, "node {t} bag={}", fmt_set(bag)).unwrap();
        if guard_on_node {
            write!(out, " guard={}", fmt_set(&guards[t])).unwrap();
        }
        out.push('\n');
    }
    for (t, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            write!(out, "arc {p} {t}").unwrap();
            if !guard_on_node {
                write!(out, " guard={}", fmt_set(&guards[t])).unwrap();
            }
            out.push('\n');
        }
    }
}

fn write_branch(out: &mut String, tree: &SubcubicTree, sets: &BTreeMap<(usize, usize), BTreeSet<usize>>) {
    for (t, item) in tree.item.iter().enumerate() {
        match item {
            Some(i) => writeln!(out, "node {t} item={i}").unwrap(),
            None => writeln!(out, "node {t} item=-").unwrap(),
        }
    }
    for (a, b) in tree.edges() {
        write!(out, "edge {a} {b}").unwrap();
        if let Some(s) = sets.get(&(a, b)) {
            write!(out, " set={}", fmt_set(s)).unwrap();
        }
        out.push('\n');
    }
}

pub fn write_dtd(dec: &Dtd) -> String {
    let mut out = String::from("dtd\n");
    write_rooted(&mut out, &dec.parent, &dec.bags, &dec.guards, false);
    out
}

pub fn write_decomposition(dec: &Decomposition) -> String {
    match dec {
        Decomposition::Dtd(d) => write_dtd(d),
        Decomposition::Ghd(g) => {
            let mut out = String::from("ghd\n");
            write_rooted(&mut out, &g.parent, &g.bags, &g.guards, true);
            out
        }
        Decomposition::Dbd(d) => {
            let mut out = String::from("dbd\n");
            write_branch(&mut out, &d.tree, &d.hitting);
            out
        }
        Decomposition::Hbd(h) => {
            let mut out = String::from("hbd\n");
            write_branch(&mut out, &h.tree, &h.cover);
            out
        }
    }
}

/// Node records must be numbered `0, 1, 2, ...` in order.
fn expect_node(line: usize, toks: &mut std::str::SplitWhitespace, count: usize) -> Result<(), ParseError> {
    let id = num(line, toks.next().unwrap_or(""))?;
    if id != count {
        return err(line, format!("expected node {count}, got {id}"));
    }
    Ok(())
}

/// Parents, bags and guards of a rooted decomposition.
type Rooted = (Vec<Option<usize>>, Vec<VertexSet>, Vec<VertexSet>);

fn parse_rooted<'a>(body: impl Iterator<Item = (usize, &'a str)>, guard_on_node: bool) -> Result<Rooted, ParseError> {
    let mut bags = Vec::new();
    let mut guards = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    for (line, l) in body {
        let mut toks = l.split_whitespace();
        match toks.next().unwrap() {
            "node" => {
                if parent.len() > bags.len() || bags.len() != guards.len() || parent.iter().any(Option::is_some) {
                    return err(line, "node records must precede arc records");
                }
                expect_node(line, &mut toks, bags.len())?;
                bags.push(set(line, field(line, toks.next(), "bag")?)?);
                guards.push(if guard_on_node { set(line, field(line, toks.next(), "guard")?)? } else { VertexSet::new() });
                no_more(line, toks)?;
            }
            "arc" => {
                if parent.is_empty() {
                    parent = vec![None; bags.len()];
                }
                let (p, c) = (num(line, toks.next().unwrap_or(""))?, num(line, toks.next().unwrap_or(""))?);
                if p >= bags.len() || c >= bags.len() || p == c {
                    return err(line, format!("arc ({p},{c}) out of range"));
                }
                if parent[c].is_some() {
                    return err(line, format!("node {c} has two parents"));
                }
                parent[c] = Some(p);
                if !guard_on_node {
                    guards[c] = set(line, field(line, toks.next(), "guard")?)?;
                }
                no_more(line, toks)?;
            }
            other => return err(line, format!("unknown record {other:?}")),
        }
    }
    if parent.is_empty() {
        parent = vec![None; bags.len()];
    }
    Ok((parent, bags, guards))
}

type BranchSets = BTreeMap<(usize, usize), BTreeSet<usize>>;

fn parse_branch<'a>(body: impl Iterator<Item = (usize, &'a str)>) -> Result<(SubcubicTree, BranchSets), ParseError> {
    let mut item = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut sets = BTreeMap::new();
    for (line, l) in body {
        let mut toks = l.split_whitespace();
        match toks.next().unwrap() {
            "node" => {
                if !edges.is_empty() {
                    return err(line, "node records must precede edge records");
                }
                expect_node(line, &mut toks, item.len())?;
                let v = field(line, toks.next(), "item")?;
                item.push(if v == "-" { None } else { Some(num(line, v)?) });
                no_more(line, toks)?;
            }
            "edge" => {
                let (a, b) = (num(line, toks.next().unwrap_or(""))?, num(line, toks.next().unwrap_or(""))?);
                let (a, b) = (a.min(b), a.max(b));
                if b >= item.len() || a == b || edges.contains(&(a, b)) {
                    return err(line, format!("bad tree edge ({a},{b})"));
                }
                edges.push((a, b));
                if let Some(t) = toks.next() {
                    sets.insert((a, b), set(line, field(line, Some(t), "set")?)?);
                }
                no_more(line, toks)?;
            }
            other => return err(line, format!("unknown record {other:?}")),
        }
    }
    Ok((SubcubicTree::from_edges(item.len(), &edges, item), sets))
}

/// Parses any decomposition; the first record names its kind.
pub fn parse_decomposition(text: &str) -> Result<Decomposition, ParseError> {
    let mut it = lines(text);
    let Some((line, kind)) = it.next() else {
        return err(1, "empty input");
    };
    match kind {
        "dtd" => {
            let (parent, bags, guards) = parse_rooted(it, false)?;
            Ok(Decomposition::Dtd(Dtd { parent, bags, guards }))
        }
        "ghd" => {
            let (parent, bags, guards) = parse_rooted(it, true)?;
            Ok(Decomposition::Ghd(Ghd { parent, bags, guards }))
        }
        "dbd" => {
            let (tree, hitting) = parse_branch(it)?;
            Ok(Decomposition::Dbd(Dbd { tree, hitting }))
        }
        "hbd" => {
            let (tree, cover) = parse_branch(it)?;
            Ok(Decomposition::Hbd(Hbd { tree, cover }))
        }
        other => err(line, format!("unknown decomposition kind {other:?}")),
    }
}

pub const CERTIFICATE_HEADER: &str = "dtw1-certificate v1";

/// Certificate text. The digraph is identified by [`digraph_hash`].
pub fn write_certificate(d: &Digraph, cert: &Certificate) -> String {
    let mut out = format!("{CERTIFICATE_HEADER}\ndigraph {}\n", digraph_hash(d));
    match cert {
        Certificate::Yes(dtd) => {
            out.push_str("verdict YES\n");
            write_rooted(&mut out, &dtd.parent, &dtd.bags, &dtd.guards, false);
        }
        Certificate::No(w) => {
            out.push_str("verdict NO\n");
            writeln!(out, "pattern {}", w.pattern).unwrap();
            for s in &w.script {
                writeln!(out, "script {s}").unwrap();
            }
            for (p, b) in w.branch_sets.iter().enumerate() {
                writeln!(out, "branchset {p}: {}", fmt_set(b)).unwrap();
            }
            out.push_str("chain");
            for c in &w.chain.cycles {
                write!(out, " {c}").unwrap();
            }
            out.push('\n');
            writeln!(out, "fallback {}", if w.fallback_used { "yes" } else { "no" }).unwrap();
            writeln!(out, "haven order={}", w.haven.order).unwrap();
            for (x, c) in &w.haven.map {
                writeln!(out, "haven {} {}", fmt_set(x), fmt_set(c)).unwrap();
            }
        }
    }
    out
}

/// A parsed certificate with the digraph hash it claims.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedCertificate {
    pub digraph_hash: String,
    pub certificate: Certificate,
}

pub fn parse_certificate(text: &str) -> Result<ParsedCertificate, ParseError> {
    let mut it = lines(text).peekable();
    match it.next() {
        Some((_, CERTIFICATE_HEADER)) => {}
        Some((line, _)) => return err(line, format!("expected header {CERTIFICATE_HEADER:?}")),
        None => return err(1, "empty input"),
    }
    let Some((line, l)) = it.next() else { return err(1, "missing digraph line") };
    let Some(hash) = l.strip_prefix("digraph ") else { return err(line, "expected `digraph <hash>`") };
    let hash = hash.trim();
    if hash.len() != 64 || !hash.chars().all(|c| c.is_ascii_hexdigit()) {
        return err(line, "malformed digraph hash");
    }
    let Some((line, verdict)) = it.next() else { return err(line, "missing verdict") };
    let certificate = match verdict {
        "verdict YES" => {
            let (parent, bags, guards) = parse_rooted(it, false)?;
            Certificate::Yes(Dtd { parent, bags, guards })
        }
        "verdict NO" => Certificate::No(parse_no(it)?),
        _ => return err(line, "expected `verdict YES` or `verdict NO`"),
    };
    Ok(ParsedCertificate { digraph_hash: hash.to_string(), certificate })
}

fn parse_no<'a>(body: impl Iterator<Item = (usize, &'a str)>) -> Result<NoWitness, ParseError> {
    let mut pattern = None;
    let mut script = Vec::new();
    let mut branch_sets = Vec::new();
    let mut chain = None;
    let mut fallback_used = None;
    let mut order = None;
    let mut map = BTreeMap::new();
    let mut last = 1;
    for (line, l) in body {
        last = line;
        let (key, rest) = l.split_once(' ').unwrap_or((l, ""));
        match key {
            "pattern" => pattern = Some(rest.parse::<Pattern>().or_else(|e| err(line, e))?),
            "script" => script.push(rest.parse::<MinorStep>().or_else(|e| err(line, e))?),
            "branchset" => {
                let Some((p, s)) = rest.split_once(':') else { return err(line, "expected `branchset <p>: <set>`") };
                if num(line, p.trim())? != branch_sets.len() {
                    return err(line, "branch sets must be listed in pattern order");
                }
                branch_sets.push(set(line, s.trim())?);
            }
            "chain" => {
                let cycles = rest.split_whitespace().map(|t| num(line, t)).collect::<Result<_, _>>()?;
                chain = Some(CycleChain { cycles, closed: true });
            }
            "fallback" => {
                fallback_used = Some(match rest {
                    "yes" => true,
                    "no" => false,
                    _ => return err(line, "expected `fallback yes|no`"),
                })
            }
            "haven" => {
                if let Some(o) = rest.strip_prefix("order=") {
                    order = Some(num(line, o)?);
                } else {
                    let mut toks = rest.split_whitespace();
                    let x = set(line, toks.next().unwrap_or(""))?;
                    let c = set(line, toks.next().unwrap_or(""))?;
                    no_more(line, toks)?;
                    if map.insert(x, c).is_some() {
                        return err(line, "haven set listed twice");
                    }
                }
            }
            other => return err(line, format!("unknown record {other:?}")),
        }
    }
    let (Some(pattern), Some(chain), Some(fallback_used), Some(order)) = (pattern, chain, fallback_used, order) else {
        return err(last, "NO certificate needs pattern, chain, fallback and haven order records");
    };
    Ok(NoWitness { pattern, script, branch_sets, chain, haven: Haven { order, map }, fallback_used })
}

/// `move <i> cops=<set> robber=<set>` per round.
pub fn write_play(play: &[(VertexSet, VertexSet)]) -> String {
    let mut out = String::new();
    for (i, (x, r)) in play.iter().enumerate() {
        writeln!(out, "move {i} cops={} robber={}", fmt_set(x), fmt_set(r)).unwrap();
    }
    out
}

/// Strategy table: the opening placement and one rule per memory state and
/// robber component.
pub fn write_strategy(s: &CopStrategy) -> String {
    let mut out = format!("strategy budget={}\n", s.budget);
    writeln!(out, "start state={} cops={}", s.initial.0, fmt_set(&s.initial.1)).unwrap();
    for ((st, r), (next, x)) in &s.moves {
        writeln!(out, "rule state={st} robber={} next={next} cops={}", fmt_set(r), fmt_set(x)).unwrap();
    }
    out
}
