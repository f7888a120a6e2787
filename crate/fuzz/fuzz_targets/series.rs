#![no_main]

use iwasawa_core::padic::PadicRing;
use iwasawa_core::parse::parse_series;
use iwasawa_core::powerseries::SeriesRing;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let base = PadicRing::new(5, 6).unwrap();
    for vars in 1..=3 {
        let ring = SeriesRing::new(&base, vars, 6).unwrap();
        if let Ok(f) = parse_series(&ring, text) {
            // the canonical text parses back to the same series
            let again = parse_series(&ring, &f.to_string()).unwrap();
            assert_eq!(f, again);
        }
    }
});
