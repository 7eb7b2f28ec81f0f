use proptest::prelude::*;

use dtw1_core::cycles::{enumerate_cycles, strongly_connected_via_chains};
use dtw1_core::decomp::{dtd_to_dbd, dtd_to_ghd, exact_dbw, validate_dbd, validate_dtd};
use dtw1_core::digraph::Digraph;
use dtw1_core::dtw1::{hypertree_route, recognize_dtw1, s_decomposition, verify_certificate, Certificate, SplitOrder};
use dtw1_core::format::{
    digraph_hash, parse_certificate, parse_cycles, parse_decomposition, parse_edge_list, parse_hypergraph, write_certificate, write_cycles,
    write_decomposition, write_edge_list, write_hypergraph, Decomposition,
};
use dtw1_core::games::{check_strategy, solve_game, strategy_from_dbd};
use dtw1_core::hypergraph::{Hypergraph, WidthLimits};
use dtw1_core::vset::VertexSet;

const CAP: usize = 10_000;

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| u != v && bits[u * n + v]);
            Digraph::from_edges(n, edges).unwrap()
        })
    })
}

fn strong(max_n: usize) -> impl Strategy<Value = Digraph> {
    digraph(max_n).prop_map(|mut d| {
        // close a Hamiltonian cycle so every sample is strongly connected
        let n = d.n();
        for i in 0..n {
            if n > 1 && !d.has_edge(i, (i + 1) % n) {
                d.add_edge(i, (i + 1) % n).unwrap();
            }
        }
        d
    })
}

fn hypergraph() -> impl Strategy<Value = Hypergraph> {
    proptest::collection::vec(proptest::collection::btree_set(0usize..6, 1..4), 1..5).prop_map(|edges| {
        let edges: Vec<VertexSet> = edges.into_iter().collect();
        Hypergraph::from_edges(edges).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn edge_list_round_trips(d in digraph(7)) {
        let back = parse_edge_list(&write_edge_list(&d)).unwrap();
        prop_assert_eq!(&back.digraph, &d);
        prop_assert_eq!(digraph_hash(&back.digraph), digraph_hash(&d));
    }

    #[test]
    fn hypergraph_round_trips(h in hypergraph()) {
        let back = parse_hypergraph(&write_hypergraph(&h)).unwrap();
        let named: Vec<VertexSet> = back
            .hypergraph
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| back.names[v].parse::<usize>().unwrap()).collect())
            .collect();
        prop_assert_eq!(named, h.edges);
    }

    #[test]
    fn cycles_are_cycles_and_round_trip(d in digraph(6)) {
        let cycles = enumerate_cycles(&d, CAP).unwrap();
        for c in &cycles {
            prop_assert!(c.is_cycle_of(&d));
        }
        prop_assert_eq!(parse_cycles(&write_cycles(&cycles)).unwrap(), cycles);
    }

    #[test]
    fn chains_agree_with_strong_connectivity(d in digraph(6)) {
        prop_assert_eq!(strongly_connected_via_chains(&d, CAP).unwrap(), d.is_strongly_connected());
    }

    #[test]
    fn s_decomposition_pieces_are_dibraces(d in strong(7)) {
        prop_assume!(d.n() >= 2);
        for order in [SplitOrder::SmallestCut, SplitOrder::LargestCut] {
            let s = s_decomposition(&d, order);
            prop_assert_eq!(s.edges.len() + 1, s.pieces.len());
            let mut covered = VertexSet::new();
            for (t, p) in s.pieces.iter().enumerate() {
                prop_assert!(p.dibrace.is_strongly_2_connected());
                prop_assert_eq!(&s.contracted_dibrace(&d, t), &p.dibrace);
                covered.extend(p.vertices.iter().copied());
            }
            prop_assert_eq!(covered, d.vertices());
            for e in 0..s.edges.len() {
                prop_assert!(s.sigma(e).is_valid(&d));
            }
        }
    }

    #[test]
    fn certificates_verify_and_round_trip(d in strong(6)) {
        prop_assume!(d.n() >= 2);
        let cert = recognize_dtw1(&d, CAP).unwrap();
        prop_assert_eq!(verify_certificate(&d, &cert), Ok(()));
        let parsed = parse_certificate(&write_certificate(&d, &cert)).unwrap();
        prop_assert_eq!(parsed.digraph_hash, digraph_hash(&d));
        prop_assert_eq!(&parsed.certificate, &cert);
        prop_assert_eq!(hypertree_route(&d, CAP).unwrap().is_hypertree, cert.is_yes());
    }

    #[test]
    fn yes_dtds_convert_within_bounds(d in strong(6)) {
        prop_assume!(d.n() >= 2);
        if let Certificate::Yes(dtd) = recognize_dtw1(&d, CAP).unwrap() {
            let report = validate_dtd(&d, &dtd);
            prop_assert!(report.valid && report.width <= 1, "{:?}", report.violations);
            let text = write_decomposition(&Decomposition::Dtd(dtd.clone()));
            prop_assert_eq!(parse_decomposition(&text).unwrap(), Decomposition::Dtd(dtd.clone()));
            let dbd = dtd_to_dbd(&d, &dtd, CAP).unwrap();
            prop_assert!(validate_dbd(&d, &dbd, 2, CAP).unwrap().valid);
            let (_, ghd) = dtd_to_ghd(&d, &dtd, CAP).unwrap();
            prop_assert!(ghd.width() <= 2);
        }
    }

    #[test]
    fn no_instances_beat_two_cops(d in strong(5)) {
        prop_assume!(d.n() >= 2);
        let yes = recognize_dtw1(&d, CAP).unwrap().is_yes();
        prop_assert_eq!(solve_game(&d, 2).unwrap().cops_win, yes);
    }

    #[test]
    fn more_cops_never_hurt(d in digraph(5), k in 0usize..4) {
        if solve_game(&d, k).unwrap().cops_win {
            prop_assert!(solve_game(&d, k + 1).unwrap().cops_win);
        }
    }

    #[test]
    fn dbd_walk_stays_within_three_times_width(d in strong(5)) {
        prop_assume!(d.n() >= 2);
        let (w, dbd) = exact_dbw(&d, CAP, WidthLimits::default()).unwrap();
        let o = check_strategy(&d, &strategy_from_dbd(&d, &dbd).unwrap());
        prop_assert!(o.cops_win, "{:?}", o.failure);
        prop_assert!(o.max_cops <= 3 * w.max(1));
    }
}

const SEEDS: [&str; 6] = [
    include_str!("../fuzz/corpus/certificate/seed-bicycle3"),
    include_str!("../fuzz/corpus/certificate/seed-a4"),
    include_str!("../fuzz/corpus/certificate/seed-script"),
    include_str!("../fuzz/corpus/certificate/seed-yes"),
    include_str!("../fuzz/corpus/decomposition/seed-dbd"),
    include_str!("../fuzz/corpus/decomposition/seed-dtd"),
];

/// Deletes, duplicates or renumbers lines of a seed.
fn mutate(seed: &str, ops: &[(usize, u8, u8)]) -> String {
    let mut lines: Vec<String> = seed.lines().map(String::from).collect();
    for &(i, op, digit) in ops {
        if lines.is_empty() {
            break;
        }
        let i = i % lines.len();
        match op % 3 {
            0 => {
                lines.remove(i);
            }
            1 => lines.insert(i, lines[i].clone()),
            _ => {
                let d = char::from(b'0' + digit % 8);
                lines[i] = lines[i].chars().map(|c| if c.is_ascii_digit() { d } else { c }).collect();
            }
        }
    }
    lines.join("\n")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn mutated_inputs_are_rejected_without_panics(
        seed in 0..SEEDS.len(),
        ops in proptest::collection::vec((any::<usize>(), any::<u8>(), any::<u8>()), 1..4),
    ) {
        let text = mutate(SEEDS[seed], &ops);
        let targets = [
            Digraph::bidirect(3, [(0, 1), (1, 2), (2, 0)]).unwrap(),
            Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 0), (1, 3), (3, 1)]).unwrap(),
            Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap(),
        ];
        if let Ok(parsed) = parse_certificate(&text) {
            for d in &targets {
                let _ = verify_certificate(d, &parsed.certificate);
            }
        }
        match parse_decomposition(&text) {
            Ok(Decomposition::Dtd(dtd)) => {
                for d in &targets {
                    let _ = validate_dtd(d, &dtd);
                    let _ = dtd_to_dbd(d, &dtd, CAP);
                }
            }
            Ok(Decomposition::Dbd(dbd)) => {
                for d in &targets {
                    let _ = validate_dbd(d, &dbd, 3, CAP);
                }
            }
            _ => {}
        }
        let _ = parse_edge_list(&text);
        let _ = parse_hypergraph(&text);
        let _ = parse_cycles(&text);
    }
}
