fn main() {
    std::process::exit(monodromy::cli::run(std::env::args()));
}
