#![no_main]

use libfuzzer_sys::fuzz_target;
use qmat::classify::{format_cell, parse_cell};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_cell(text) {
        let again = parse_cell(&format_cell(c.q, c.n, c.k, &c.encodings)).expect("formatted cell parses");
        assert_eq!(again.encodings, c.encodings);
    }
});
