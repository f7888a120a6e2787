fn main() {
    std::process::exit(iwasawa_core::cli::run(std::env::args_os()));
}
