#![no_main]

use libfuzzer_sys::fuzz_target;

use bookstat::corpus::{decode_bytes, strip_boilerplate, tokenize, Encoding};

fuzz_target!(|data: &[u8]| {
    // latin-1 never fails; utf-8 either decodes or reports an offset
    let latin = decode_bytes(data, Encoding::Latin1).unwrap();
    let text = match decode_bytes(data, Encoding::Utf8) {
        Ok(t) => t,
        Err(_) => latin,
    };
    let body = strip_boilerplate(&text);
    let seq = tokenize(body, "fuzz");
    for token in &seq.tokens {
        assert!(!token.is_empty());
        assert!(token.chars().all(|c| c == '\'' || c.is_alphabetic()));
        assert!(!token.starts_with('\'') && !token.ends_with('\''));
    }
});
