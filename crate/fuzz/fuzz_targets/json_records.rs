#![no_main]

use libfuzzer_sys::fuzz_target;

use bookstat::io::{from_json, to_json_pretty, FitResultRecord, HalfReadRecord};
use bookstat::sections::XiStats;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = from_json::<Vec<HalfReadRecord>>(text) {
        let emitted = to_json_pretty(&records).unwrap();
        from_json::<Vec<HalfReadRecord>>(&emitted).expect("emitted json must parse");
    }
    if let Ok(records) = from_json::<Vec<FitResultRecord>>(text) {
        let emitted = to_json_pretty(&records).unwrap();
        from_json::<Vec<FitResultRecord>>(&emitted).expect("emitted json must parse");
    }
    if let Ok(xi) = from_json::<XiStats>(text) {
        let emitted = to_json_pretty(&xi).unwrap();
        from_json::<XiStats>(&emitted).expect("emitted json must parse");
    }
});
