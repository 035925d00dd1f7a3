fn main() {
    std::process::exit(loopforge::cli::run());
}
