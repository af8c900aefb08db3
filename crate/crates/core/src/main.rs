fn main() {
    std::process::exit(xxring::cli::run(std::env::args_os()));
}
