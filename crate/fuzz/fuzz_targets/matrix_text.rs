#![no_main]
use libfuzzer_sys::fuzz_target;
use posmap::linalg::text::{format_matrix, parse_matrix};

fuzz_target!(|data: &str| {
    if let Ok(m) = parse_matrix(data) {
        // anything accepted must survive a round trip
        let again = parse_matrix(&format_matrix(&m)).expect("formatted matrix parses");
        assert_eq!(again, m);
    }
});
