fn main() {
    std::process::exit(phi4lace::cli::run());
}
