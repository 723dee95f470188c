#![no_main]

use entropy_lab::io::parse_distribution_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = parse_distribution_csv(text) {
        assert!(d.mass().is_finite());
        let _ = d.is_probability();
    }
});
