#![no_main]

use iwasawa_core::groebner::PolyFp;
use iwasawa_core::parse::parse_poly_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(exprs) = parse_poly_list(text) {
        for e in &exprs {
            let _ = PolyFp::from_expr(7, 3, e);
        }
    }
    let _ = PolyFp::parse(7, 2, text);
});
