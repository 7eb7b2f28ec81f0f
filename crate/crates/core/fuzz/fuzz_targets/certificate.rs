//! Hostile certificates: the verifier must reject them cleanly.

#![no_main]

use dtw1_core::digraph::Digraph;
use dtw1_core::dtw1::verify_certificate;
use dtw1_core::format::parse_certificate;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(parsed) = parse_certificate(text) else { return };
    let b3 = Digraph::bidirect(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
    let digon = Digraph::bidirect(2, [(0, 1)]).unwrap();
    for d in [b3, digon] {
        let _ = verify_certificate(&d, &parsed.certificate);
    }
});
