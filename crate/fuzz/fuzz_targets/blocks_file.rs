#![no_main]

use libfuzzer_sys::fuzz_target;
use qmat::steiner::parse_blocks;

fuzz_target!(|data: &[u8]| {
    let Some((&q, rest)) = data.split_first() else { return };
    let q = [2, 3][q as usize % 2];
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if text.len() > 1024 {
        return;
    }
    if let Ok(blocks) = parse_blocks(q, text) {
        let n = blocks[0].ambient_dim();
        assert!(blocks.iter().all(|b| b.ambient_dim() == n));
    }
});
