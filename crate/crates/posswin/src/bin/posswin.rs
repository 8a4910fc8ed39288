fn main() {
    std::process::exit(posswin::cli::run(std::env::args().skip(1)));
}
