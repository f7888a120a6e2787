#![no_main]

use iwasawa_core::parse::parse_symbols;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_symbols(text);
    }
});
