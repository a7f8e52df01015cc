fn main() {
    std::process::exit(klimm::cli::run(std::env::args_os()));
}
