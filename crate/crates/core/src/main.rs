fn main() {
    std::process::exit(hadamard_domains::cli::run(std::env::args_os()));
}
