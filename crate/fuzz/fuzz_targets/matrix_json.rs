#![no_main]

use entropy_lab::io::{matrix_to_json, parse_matrix_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_matrix_json(text) {
        // anything accepted must survive a round trip
        let again = parse_matrix_json(&matrix_to_json(m.as_matrix())).expect("re-parse");
        assert_eq!(again, m);
    }
});
