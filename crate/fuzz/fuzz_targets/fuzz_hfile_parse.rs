#![no_main]

use gdl_core::hfile::{parse_h_file, serialize_h_file};
use gdl_core::local::FunctionSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Hostile text must never panic; accepted maps must serialize back to
    // something that re-parses to the same map, and must always be usable
    // as a FunctionSpec.
    if let Ok(map) = parse_h_file(text) {
        let canonical = serialize_h_file(&map);
        let reparsed = parse_h_file(&canonical).expect("canonical form must parse");
        assert_eq!(map, reparsed, "canonical round-trip must be stable");
        let spec = FunctionSpec::new(0, map, "fuzz").expect("parsed maps satisfy invariants");
        let _ = spec.hash();
    }
});
