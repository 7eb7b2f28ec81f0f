//! Parsing an edge list, writing it back and parsing again gives the same
//! digraph and hash.

#![no_main]

use dtw1_core::format::{digraph_hash, parse_edge_list, write_edge_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(nd) = parse_edge_list(text) else { return };
    let again = parse_edge_list(&write_edge_list(&nd.digraph)).expect("writer output parses");
    assert_eq!(again.digraph, nd.digraph);
    assert_eq!(digraph_hash(&again.digraph), digraph_hash(&nd.digraph));
});
