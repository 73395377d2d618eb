fn main() {
    std::process::exit(gradedlnd::cli::run(std::env::args()));
}
