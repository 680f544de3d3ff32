fn main() {
    std::process::exit(cherednik::cli::run(std::env::args().collect()));
}
