//! The fuzz targets' invariants, driven by proptest over token soup so they
//! run on stable.

use iwasawa_core::groebner::PolyFp;
use iwasawa_core::padic::PadicRing;
use iwasawa_core::parse::{
    parse_batch, parse_int_list, parse_poly_list, parse_prime_list, parse_series, parse_symbols,
};
use iwasawa_core::powerseries::SeriesRing;
use proptest::prelude::*;

const TOKENS: &[&str] = &[
    "t", "t1", "t2", "t3", "x", "y", "z", "p", "5", "25", "0", "1", "7", "+", "-", "*", "/", "^", "^-1", "(", ")",
    "{", "}", ";", ",", " ", "\"", "#", "\n", "--p", "--f", "prop29", "99999999999999999999",
];

fn soup() -> impl Strategy<Value = String> {
    proptest::collection::vec(proptest::sample::select(TOKENS), 0..24).prop_map(|v| v.concat())
}

fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("t".to_string()),
        Just("t2".to_string()),
        (0i64..200).prop_map(|n| n.to_string()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) * ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner, 0u32..4).prop_map(|(a, k)| format!("({a})^{k}")),
        ]
    })
}

proptest! {
    #[test]
    fn parsers_never_panic(text in soup()) {
        let base = PadicRing::new(5, 6).unwrap();
        for vars in 1..=3 {
            let ring = SeriesRing::new(&base, vars, 6).unwrap();
            if let Ok(f) = parse_series(&ring, &text) {
                prop_assert_eq!(parse_series(&ring, &f.to_string()).unwrap(), f);
            }
        }
        let _ = parse_symbols(&text);
        let _ = parse_batch(&text);
        let _ = parse_int_list(&text);
        let _ = parse_prime_list(&text);
        if let Ok(exprs) = parse_poly_list(&text) {
            for e in &exprs {
                let _ = PolyFp::from_expr(7, 3, e);
            }
        }
        let _ = PolyFp::parse(7, 2, &text);
    }

    #[test]
    fn series_text_round_trips(text in expr()) {
        let base = PadicRing::new(5, 6).unwrap();
        let ring = SeriesRing::new(&base, 2, 8).unwrap();
        let f = parse_series(&ring, &text).unwrap();
        prop_assert_eq!(parse_series(&ring, &f.to_string()).unwrap(), f);
    }
}

#[test]
fn fuzz_corpus_seeds_parse() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fuzz/corpus");
    let base = PadicRing::new(5, 6).unwrap();
    let ring = SeriesRing::new(&base, 3, 6).unwrap();
    let read = |target: &str| -> Vec<String> {
        std::fs::read_dir(format!("{root}/{target}"))
            .unwrap()
            .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
            .collect()
    };
    for s in read("series") {
        parse_series(&ring, &s).unwrap();
    }
    for s in read("symbols") {
        parse_symbols(&s).unwrap();
    }
    for s in read("batch") {
        parse_batch(&s).unwrap();
    }
    for s in read("int_list") {
        parse_int_list(&s).unwrap();
    }
    for s in read("poly_list") {
        parse_poly_list(&s).unwrap();
    }
    for s in read("prime_list") {
        parse_prime_list(&s).unwrap();
    }
}
