fn main() {
    std::process::exit(mapscheme::cli::main_with(std::env::args().collect()));
}
