//! Drivers for the acceptance criteria. Each driver checks one property
//! over a deterministic corpus and reports counts, failures and timing.
//! Instances that hit the cycle cap are reported as skipped.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::cycles::{cycle_hypergraph, strongly_connected_via_chains, CycleError};
use crate::decomp::{dtd_to_dbd, dtd_to_ghd, exact_dbw, validate_dbd, validate_dtd, Dbd, DecompError, Dtd};
use crate::digraph::Digraph;
use crate::dtw1::extract::FALLBACK_STATE_LIMIT;
use crate::dtw1::{exhaustive_search, hypertree_route, recognize_dtw1, replay, verify_certificate, Certificate, Dtw1Error, Minor, Pattern};
use crate::games::{check_strategy, components_correspond, dcn_exact, is_k_hyperlinked, is_k_linked, solve_game, strategy_from_dbd};
use crate::generate;
use crate::hypergraph::{
    dual, exact_hbw, exact_hw, has_helly, hypertree_witness, is_alpha_acyclic, is_chordal, is_conformal, line_graph, two_section,
    validate_ghd, Hypergraph, HypergraphError, WidthLimits,
};
use crate::vset::VertexSet;

/// Failures kept verbatim per criterion; the rest are only counted.
const KEPT_FAILURES: usize = 20;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cap: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 2024, cap: 10_000 }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checked: usize,
    pub skipped: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl CriterionReport {
    fn new(id: u8, title: &'static str) -> Self {
        CriterionReport { id, title, checked: 0, skipped: 0, failed: 0, failures: Vec::new(), notes: Vec::new(), elapsed: Duration::ZERO }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(msg);
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(msg());
        }
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {}: {} (checked {}, failed {}, skipped {}, {:.2}s)",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.checked,
            self.failed,
            self.skipped,
            self.elapsed.as_secs_f64()
        )
    }
}

fn timed(mut r: CriterionReport, start: Instant) -> CriterionReport {
    r.elapsed = start.elapsed();
    r
}

fn edges(d: &Digraph) -> String {
    format!("n={} {:?}", d.n(), d.edges())
}

/// One instance of the equivalence runs with everything later criteria reuse.
#[derive(Clone, Debug)]
pub struct Record {
    pub digraph: Digraph,
    pub certificate: Certificate,
    pub route_dtd: Option<Dtd>,
}

impl Record {
    /// Width-one decompositions produced for this instance.
    pub fn dtds(&self) -> Vec<&Dtd> {
        let mut out: Vec<&Dtd> = self.route_dtd.iter().collect();
        if let Certificate::Yes(dtd) = &self.certificate {
            out.push(dtd);
        }
        out
    }
}

/// Every labelled strongly connected digraph on 2 to 4 vertices.
pub fn exhaustive_corpus() -> Vec<Digraph> {
    (2..=4).flat_map(generate::all_strongly_connected).collect()
}

/// 300 random strongly connected digraphs: 50 for every pair of
/// `n ∈ {5, 6}` and `p ∈ {0.2, 0.4, 0.6}`.
pub fn random_corpus(seed: u64) -> Vec<Digraph> {
    let mut rng = generate::rng(seed);
    let mut out = Vec::new();
    for n in [5, 6] {
        for p in [0.2, 0.4, 0.6] {
            for _ in 0..50 {
                out.push(generate::random_strongly_connected(&mut rng, n, p));
            }
        }
    }
    out
}

/// The characterisations of directed treewidth one compared on `corpus`:
/// the recogniser, the hypertree route, exhaustive butterfly-minor search
/// for a bicycle or `A4`, and the two-cop game. Certificates are replayed.
pub fn check_equivalence(id: u8, title: &'static str, corpus: &[Digraph], cap: usize) -> (CriterionReport, Vec<Record>) {
    let start = Instant::now();
    let mut r = CriterionReport::new(id, title);
    let mut records = Vec::new();
    let mut fallbacks = 0;
    let mut rebuilt = 0;
    for d in corpus {
        let cert = match recognize_dtw1(d, cap) {
            Ok(c) => c,
            Err(Dtw1Error::Cycles(CycleError::CapExceeded { .. })) => {
                r.skipped += 1;
                continue;
            }
            Err(e) => {
                r.check(false, || format!("{}: recogniser failed: {e}", edges(d)));
                continue;
            }
        };
        let route = match hypertree_route(d, cap) {
            Ok(route) => route,
            Err(_) => {
                r.skipped += 1;
                continue;
            }
        };
        if let Certificate::No(w) = &cert {
            fallbacks += usize::from(w.fallback_used);
        }
        rebuilt += usize::from(route.rebuilt_host);
        r.check(verify_certificate(d, &cert).is_ok(), || {
            format!("{}: certificate does not verify: {:?}", edges(d), verify_certificate(d, &cert))
        });
        if let Some(dtd) = &route.dtd {
            let rep = validate_dtd(d, dtd);
            r.check(rep.valid && rep.width <= 1, || format!("{}: hypertree-route dtd invalid: {:?}", edges(d), rep.violations));
        }
        let minor = exhaustive_search(Minor::new(d), FALLBACK_STATE_LIMIT);
        if let Some((m, p, _)) = &minor {
            let ok = replay(d, &m.script).is_ok_and(|back| Pattern::recognise(&back.g).is_some_and(|(q, _)| q == *p));
            r.check(ok, || format!("{}: oracle script does not replay", edges(d)));
        }
        let game = solve_game(d, 2).map(|s| s.cops_win);
        let yes = cert.is_yes();
        let verdicts = (yes, route.is_hypertree, minor.is_none(), game.clone());
        r.check(route.is_hypertree == yes && minor.is_none() == yes && game == Ok(yes), || {
            format!("{}: recogniser/hypertree/no-minor/two-cops = {verdicts:?}", edges(d))
        });
        records.push(Record { digraph: d.clone(), certificate: cert, route_dtd: route.dtd });
    }
    r.notes.push(format!("{fallbacks} NO certificates needed the exhaustive fallback"));
    r.notes.push(format!("{rebuilt} hypertree-route dtds needed a host tree rebuilt from the 2-vertex pieces"));
    (timed(r, start), records)
}

/// Two cops lose on every NO instance.
pub fn check_havens_beat_two_cops(records: &[Record]) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(3, "two cops lose on every NO instance");
    for rec in records.iter().filter(|rec| !rec.certificate.is_yes()) {
        let d = &rec.digraph;
        let won = solve_game(d, 2).map(|s| s.cops_win);
        r.check(won == Ok(false), || format!("{}: two-cop game returned {won:?}", edges(d)));
    }
    timed(r, start)
}

fn limits() -> WidthLimits {
    WidthLimits { max_vertices: 24, max_edges: 24, max_leaves: 12 }
}

/// Strongly connected digraphs on 2 to 5 vertices with at most 12 directed
/// cycles, one per isomorphism class.
pub fn small_cycle_corpus() -> Vec<Digraph> {
    let mut out = Vec::new();
    for n in 2..=5 {
        let mut seen = HashSet::new();
        for d in generate::all_digraphs(n) {
            if !d.is_strongly_connected() || !seen.insert(generate::canonical_code(&d)) {
                continue;
            }
            if cycle_hypergraph(&d, 12).is_ok() {
                out.push(d);
            }
        }
    }
    out
}

/// Exact directed branch-width equals exact hyperbranch-width of the dual
/// cycle hypergraph.
pub fn check_dbw_equals_hbw(cap: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(4, "dbw(D) = hbw(dual C(D)) exhaustively, n <= 5, <= 12 cycles");
    let corpus = small_cycle_corpus();
    for d in &corpus {
        let dbw = exact_dbw(d, cap, limits());
        let h = cycle_hypergraph(d, cap).map(|ch| dual(&ch.hypergraph()));
        let hbw = h.map_err(DecompError::from).and_then(|h| exact_hbw(&h, limits()).map_err(DecompError::from));
        match (dbw, hbw) {
            (Ok((a, _)), Ok((b, _))) => r.check(a == b, || format!("{}: dbw {a} != hbw {b}", edges(d))),
            (Err(DecompError::Cycles(_)), _) | (_, Err(DecompError::Cycles(_))) => r.skipped += 1,
            (a, b) => r.check(false, || format!("{}: computation failed: {:?} {:?}", edges(d), a.err(), b.err())),
        }
    }
    r.notes.push(format!("{} isomorphism classes", corpus.len()));
    timed(r, start)
}

/// Every width-one decomposition converts to a directed branch
/// decomposition of validated width at most two.
pub fn check_dtd_to_dbd(records: &[Record], cap: usize) -> (CriterionReport, Vec<(Digraph, Dbd)>) {
    let start = Instant::now();
    let mut r = CriterionReport::new(5, "width-1 dtd converts to a dbd of width <= 2");
    let mut dbds = Vec::new();
    for rec in records {
        let d = &rec.digraph;
        for dtd in rec.dtds() {
            match dtd_to_dbd(d, dtd, cap).and_then(|dbd| validate_dbd(d, &dbd, 2, cap).map(|rep| (dbd, rep))) {
                Ok((dbd, rep)) => {
                    r.check(rep.valid && rep.width <= 2, || format!("{}: dbd width {} {:?}", edges(d), rep.width, rep.violations));
                    dbds.push((d.clone(), dbd));
                }
                Err(DecompError::Cycles(_)) => r.skipped += 1,
                Err(e) => r.check(false, || format!("{}: conversion failed: {e}", edges(d))),
            }
        }
    }
    (timed(r, start), dbds)
}

/// Every decomposition converts to a generalised hypertree decomposition
/// of the dual cycle hypergraph of width at most one more.
pub fn check_dtd_to_ghd(records: &[Record], cap: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(6, "dtd converts to a ghd of the dual of width <= dtd width + 1");
    for rec in records {
        let d = &rec.digraph;
        for dtd in rec.dtds() {
            let w = validate_dtd(d, dtd).width;
            match dtd_to_ghd(d, dtd, cap) {
                Ok((h, ghd)) => {
                    let rep = validate_ghd(&h, &ghd);
                    r.check(rep.valid && rep.width <= w + 1, || format!("{}: ghd width {} {:?}", edges(d), rep.width, rep.violations));
                }
                Err(DecompError::Cycles(_)) => r.skipped += 1,
                Err(e) => r.check(false, || format!("{}: conversion failed: {e}", edges(d))),
            }
        }
    }
    timed(r, start)
}

/// The cop strategy read off a width-`k` decomposition wins with at most
/// `3k` cops against every robber. Uses optimal decompositions of the
/// equivalence corpora together with the converted ones.
pub fn check_strategies(records: &[Record], converted: &[(Digraph, Dbd)], cap: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(7, "strategy from a width-k dbd wins with <= 3k cops");
    let mut cases: Vec<(Digraph, Dbd)> = converted.to_vec();
    for rec in records.iter().filter(|rec| rec.digraph.n() <= 6) {
        match exact_dbw(&rec.digraph, cap, limits()) {
            Ok((_, dbd)) => cases.push((rec.digraph.clone(), dbd)),
            Err(_) => r.skipped += 1,
        }
    }
    let mut by_width = [0usize; 3];
    for (d, dbd) in &cases {
        let k = dbd.width();
        if !(1..=2).contains(&k) {
            continue;
        }
        by_width[k] += 1;
        let outcome = strategy_from_dbd(d, dbd).map(|s| (s.budget, check_strategy(d, &s)));
        r.check(matches!(&outcome, Ok((budget, o)) if o.cops_win && o.max_cops <= 3 * k && *budget <= 3 * k), || {
            format!("{}: width {k}: {:?}", edges(d), outcome.as_ref().map(|(b, o)| (b, o.cops_win, o.max_cops, o.failure.clone())))
        });
    }
    r.notes.push(format!("{} width-1 and {} width-2 decompositions", by_width[1], by_width[2]));
    timed(r, start)
}

/// Strong connectivity through chains of cycles agrees with the usual
/// definition.
pub fn check_chain_connectivity(seed: u64, cap: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(8, "strong connectivity via chains of cycles");
    let mut rng = generate::rng(seed ^ 8);
    let random = (0..200).map(|_| {
        let n = rng.gen_range(1..=6);
        let p = [0.2, 0.4, 0.6][rng.gen_range(0..3)];
        generate::random_digraph(&mut rng, n, p)
    });
    let all: Vec<Digraph> = (1..=4).flat_map(generate::all_digraphs).chain(random).collect();
    for d in all {
        match strongly_connected_via_chains(&d, cap) {
            Ok(b) => r.check(b == d.is_strongly_connected(), || format!("{}: chains say {b}", edges(&d))),
            Err(_) => r.skipped += 1,
        }
    }
    timed(r, start)
}

/// Indices of the dual hyperedges `e_v`, `v ∈ w`.
fn dual_of(h: &Hypergraph, w: &VertexSet) -> BTreeSet<usize> {
    (0..h.edges.len()).filter(|&i| w.contains(&h.labels[i])).collect()
}

fn random_subset<R: Rng>(rng: &mut R, n: usize, max: usize) -> VertexSet {
    let size = rng.gen_range(0..=max.min(n));
    let mut out = VertexSet::new();
    while out.len() < size {
        out.insert(rng.gen_range(0..n));
    }
    out
}

/// Component correspondence for `D - S`, and `W` k-linked in `D` exactly
/// when `dual(W)` is k-hyperlinked in the dual cycle hypergraph, for the
/// literal definitions (`|S| <= k` against `|S| < k`).
pub fn check_linked_sets(seed: u64, cap: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(9, "component bijection and k-linked <=> k-hyperlinked (k <= 2)");
    let mut rng = generate::rng(seed ^ 9);
    let (mut literal_bad, mut shifted_bad, mut exist_bad, mut exist_shifted_bad) = (0, 0, 0, 0);
    for _ in 0..200 {
        let n = rng.gen_range(2..=5);
        let d = generate::random_strongly_connected(&mut rng, n, 0.4);
        let Ok(ch) = cycle_hypergraph(&d, cap) else {
            r.skipped += 1;
            continue;
        };
        let h = dual(&ch.hypergraph());
        let s = random_subset(&mut rng, n, 2);
        r.check(components_correspond(&d, &h, &s), || format!("{}: components of D - {s:?} do not correspond", edges(&d)));
        let mut w = random_subset(&mut rng, n, n);
        if w.is_empty() {
            w.insert(0);
        }
        let k = rng.gen_range(1..=2);
        let dw = dual_of(&h, &w);
        let linked = is_k_linked(&d, &w, k);
        let hyper = is_k_hyperlinked(&h, &dw, k);
        if linked != hyper {
            literal_bad += 1;
        }
        r.check(linked == hyper, || format!("{}: W = {w:?}, k = {k}: linked {linked}, hyperlinked {hyper}", edges(&d)));
        // diagnostics for the analysis of the literal statement
        if linked != is_k_hyperlinked(&h, &dw, k + 1) {
            shifted_bad += 1;
        }
        let subsets: Vec<VertexSet> = (1u32..1 << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect();
        let any_linked = subsets.iter().any(|w| is_k_linked(&d, w, k));
        let any_hyper = |k| subsets.iter().any(|w| is_k_hyperlinked(&h, &dual_of(&h, w), k));
        if any_linked != any_hyper(k) {
            exist_bad += 1;
        }
        if any_linked != any_hyper(k + 1) {
            exist_shifted_bad += 1;
        }
    }
    r.notes.push(format!(
        "per-set disagreements: literal {literal_bad}, with k+1 on the hypergraph side {shifted_bad}; \
         existence disagreements: literal {exist_bad}, with k+1 {exist_shifted_bad}"
    ));
    timed(r, start)
}

/// The five hypertree characterisations on one hypergraph.
pub fn hypertree_characterisations(h: &Hypergraph) -> Result<[bool; 5], HypergraphError> {
    let dh = dual(h);
    let witness = hypertree_witness(h).is_some_and(|w| w.verify(h));
    let helly = has_helly(h) && is_chordal(&line_graph(h));
    let conformal = is_conformal(&dh) && is_chordal(&two_section(&dh));
    let acyclic = is_alpha_acyclic(&dh);
    let hw1 = exact_hw(&dh, 1, limits())?.is_some();
    Ok([witness, helly, conformal, acyclic, hw1])
}

pub fn check_hypertrees(seed: u64, records: &[Record], cap: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(10, "five hypertree characterisations agree");
    let mut rng = generate::rng(seed ^ 10);
    let mut hs: Vec<Hypergraph> = (0..500)
        .map(|_| {
            let (n, m) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            generate::random_hypergraph(&mut rng, n, m)
        })
        .collect();
    for rec in records {
        match cycle_hypergraph(&rec.digraph, cap) {
            Ok(ch) => {
                let h = ch.hypergraph();
                hs.push(dual(&h));
                hs.push(h);
            }
            Err(_) => r.skipped += 1,
        }
    }
    for h in hs {
        match hypertree_characterisations(&h) {
            Ok(v) => r.check(v.iter().all(|&b| b == v[0]), || format!("edges {:?}: {v:?}", h.edges)),
            Err(_) => r.skipped += 1,
        }
    }
    timed(r, start)
}

/// The named instances with known answers.
pub fn check_named(seed: u64, cap: usize) -> CriterionReport {
    let start = Instant::now();
    let mut r = CriterionReport::new(11, "named instances");
    let digon = Digraph::bidirect(2, [(0, 1)]).unwrap();
    let c3 = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
    let b3 = Pattern::Bicycle(3).digraph();
    let a4 = Pattern::A4.digraph();
    let mut rng = generate::rng(seed ^ 11);
    let mut yes = vec![("digon", digon), ("directed C3", c3)];
    yes.push(("bidirected tree", generate::random_bidirected_tree(&mut rng, 7)));
    yes.push(("bidirected tree", generate::random_bidirected_tree(&mut rng, 9)));
    for n in [4, 6, 8] {
        yes.push(("subdivided bidirected tree", generate::random_subdivided_bidirected_tree(&mut rng, n)));
    }
    for (name, d) in &yes {
        let cert = recognize_dtw1(d, cap);
        if matches!(cert, Err(Dtw1Error::Cycles(_))) {
            r.skipped += 1;
            continue;
        }
        r.check(matches!(&cert, Ok(c) if c.is_yes() && verify_certificate(d, c).is_ok()), || {
            format!("{name} {}: expected a verified YES", edges(d))
        });
    }
    for (name, d, p) in [("bidirected C3", &b3, Pattern::Bicycle(3)), ("A4", &a4, Pattern::A4)] {
        let cert = recognize_dtw1(d, cap);
        if matches!(cert, Err(Dtw1Error::Cycles(_))) {
            r.skipped += 1;
            continue;
        }
        r.check(matches!(&cert, Ok(c @ Certificate::No(w)) if w.pattern == p && verify_certificate(d, c).is_ok()), || {
            format!("{name}: expected a verified NO with {p}")
        });
    }
    let dcn = dcn_exact(&a4, 4);
    r.check(dcn == Ok(Some(3)), || format!("A4: dcn_exact = {dcn:?}"));
    timed(r, start)
}

/// Runs all eleven criteria in order.
pub fn run_all(cfg: SuiteConfig) -> Vec<CriterionReport> {
    let (c1, rec1) = check_equivalence(1, "equivalence on all strongly connected digraphs, n = 2..4", &exhaustive_corpus(), cfg.cap);
    let (c2, rec2) =
        check_equivalence(2, "equivalence on 300 random strongly connected digraphs, n = 5, 6", &random_corpus(cfg.seed), cfg.cap);
    let c3 = check_havens_beat_two_cops(&rec1);
    let c4 = check_dbw_equals_hbw(cfg.cap);
    let all: Vec<Record> = rec1.iter().chain(&rec2).cloned().collect();
    let (c5, converted) = check_dtd_to_dbd(&all, cfg.cap);
    let c6 = check_dtd_to_ghd(&all, cfg.cap);
    let c7 = check_strategies(&all, &converted, cfg.cap);
    let c8 = check_chain_connectivity(cfg.seed, cfg.cap);
    let c9 = check_linked_sets(cfg.seed, cfg.cap);
    let c10 = check_hypertrees(cfg.seed, &rec1, cfg.cap);
    let c11 = check_named(cfg.seed, cfg.cap);
    vec![c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11]
}
