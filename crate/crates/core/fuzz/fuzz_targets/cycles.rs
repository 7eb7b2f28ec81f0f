#![no_main]

use dtw1_core::format::{parse_cycles, write_cycles};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cycles) = parse_cycles(text) else { return };
    assert_eq!(parse_cycles(&write_cycles(&cycles)).unwrap(), cycles);
});
