#![no_main]

use gdl_core::cache::{decode_cache, write_cache};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Arbitrary bytes must never panic or over-allocate; a successful
    // decode must re-encode to the identical byte stream.
    if let Ok(table) = decode_cache(data, None) {
        let mut bytes = Vec::new();
        write_cache(&table, &mut bytes).expect("in-memory write cannot fail");
        assert_eq!(bytes, data, "decode/encode must round-trip");
        // hash-checked decode of the same bytes agrees
        let again = decode_cache(data, Some(table.spec_hash())).expect("hash matches");
        assert_eq!(again, table);
    }
});
