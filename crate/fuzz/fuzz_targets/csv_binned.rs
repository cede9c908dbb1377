#![no_main]

use libfuzzer_sys::fuzz_target;

use bookstat::io::{binned_to_csv, parse_binned_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(binned) = parse_binned_csv(text) {
        let emitted = binned_to_csv(&binned);
        let again = parse_binned_csv(&emitted).expect("emitted csv must parse");
        assert_eq!(binned_to_csv(&again), emitted);
    }
});
