fn main() {
    std::process::exit(coupled_are_cli::run(std::env::args().skip(1)));
}
