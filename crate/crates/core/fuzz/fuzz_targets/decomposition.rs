//! Round-trips the interchange format and runs the validators on whatever
//! parses, against a fixed digraph. Validators must reject, never panic.

#![no_main]

use dtw1_core::decomp::{validate_dbd, validate_dtd};
use dtw1_core::digraph::Digraph;
use dtw1_core::format::{parse_decomposition, write_decomposition, Decomposition};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(dec) = parse_decomposition(text) else { return };
    let written = write_decomposition(&dec);
    assert_eq!(parse_decomposition(&written).unwrap(), dec);

    let d = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 2)]).unwrap();
    match &dec {
        Decomposition::Dtd(dtd) => {
            let _ = validate_dtd(&d, dtd);
        }
        Decomposition::Dbd(dbd) => {
            let _ = validate_dbd(&d, dbd, 4, 100);
        }
        _ => {}
    }
});
