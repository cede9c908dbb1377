#![no_main]

use libfuzzer_sys::fuzz_target;

use bookstat::cli::ConfigFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // must reject or accept without panicking
    let _ = ConfigFile::parse(text);
});
