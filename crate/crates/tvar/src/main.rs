fn main() {
    std::process::exit(tvar::cli::run(std::env::args_os()));
}
