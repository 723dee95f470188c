#![no_main]

use entropy_lab::io::parse_energies_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((energies, lambda)) = parse_energies_csv(text) {
        assert_eq!(energies.len(), lambda.atoms().len());
        assert!(energies.iter().all(|e| e.is_finite()));
    }
});
