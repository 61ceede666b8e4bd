#![no_main]

use hypermatch::combinatorics::parse_vertex_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_vertex_list(text) {
        let joined = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(parse_vertex_list(&joined).unwrap(), v);
    }
});
