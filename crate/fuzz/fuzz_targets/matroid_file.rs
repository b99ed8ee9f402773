#![no_main]

use libfuzzer_sys::fuzz_target;
use qmat::QMatroid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = QMatroid::parse_file(text) {
        m.validate().expect("parsed matroids are valid");
        assert_eq!(QMatroid::parse_file(&m.to_file_string()).unwrap(), m);
    }
});
