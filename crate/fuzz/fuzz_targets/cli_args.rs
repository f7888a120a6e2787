#![no_main]

use iwasawa_core::cli::Cli;
use libfuzzer_sys::fuzz_target;

// Argument parsing only; nothing is executed.
fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let argv = std::iter::once("iwasawa").chain(text.split('\0'));
    let _ = <Cli as clap::Parser>::try_parse_from(argv);
});
