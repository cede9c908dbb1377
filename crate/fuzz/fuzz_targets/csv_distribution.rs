#![no_main]

use libfuzzer_sys::fuzz_target;

use bookstat::io::{dist_from_rows, dist_to_csv, parse_dist_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = parse_dist_csv(text) {
        // anything accepted must survive a round trip
        let dist = dist_from_rows(&rows);
        let emitted = dist_to_csv(&dist);
        let again = parse_dist_csv(&emitted).expect("emitted csv must parse");
        assert_eq!(dist_to_csv(&dist_from_rows(&again)), emitted);
    }
});
