#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(points) = posmap::cli::parse_points(data) {
        assert!(points.iter().all(|(a, b)| a.is_finite() && b.is_finite()));
    }
});
