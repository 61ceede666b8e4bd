#![no_main]

use hypermatch::io::{from_json, to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(h) = from_json(text) {
        let again = from_json(&to_json(&h)).expect("serialized hypergraph parses");
        assert_eq!(again, h);
    }
});
