#![no_main]

use libfuzzer_sys::fuzz_target;

use bookstat::freqstats::CurveLabel;
use bookstat::io::{growth_to_csv, parse_growth_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = parse_growth_csv(text, CurveLabel::Real) {
        let emitted = growth_to_csv(&curve);
        let again = parse_growth_csv(&emitted, CurveLabel::Real).expect("emitted csv must parse");
        assert_eq!(growth_to_csv(&again), emitted);
    }
});
