fn main() {
    std::process::exit(beliefnet_cli::run(std::env::args().collect()));
}
