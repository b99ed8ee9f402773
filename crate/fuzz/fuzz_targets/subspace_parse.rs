#![no_main]

use libfuzzer_sys::fuzz_target;
use qmat::Subspace;

fuzz_target!(|data: &[u8]| {
    let Some((&q, rest)) = data.split_first() else { return };
    let q = [2, 3, 5, 7][q as usize % 4];
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if text.len() > 256 {
        return;
    }
    if let Ok(s) = Subspace::parse(q, text) {
        let again = Subspace::parse(q, &s.to_string()).expect("display output parses");
        assert_eq!(again, s);
    }
});
