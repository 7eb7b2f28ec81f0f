#![no_main]

use dtw1_core::format::{parse_hypergraph, write_hypergraph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(nh) = parse_hypergraph(text) else { return };
    let written = write_hypergraph(&nh.hypergraph);
    let again = parse_hypergraph(&written).expect("writer output parses");
    assert_eq!(write_hypergraph(&again.hypergraph), written);
});
