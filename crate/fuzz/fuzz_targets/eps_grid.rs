#![no_main]

use entropy_lab::io::parse_eps_grid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = std::str::from_utf8(data) else { return };
    if let Ok(grid) = parse_eps_grid(spec) {
        assert!(grid.points().iter().all(|&e| e > 0.0 && e.is_finite()));
    }
});
