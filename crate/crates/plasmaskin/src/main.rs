fn main() {
    std::process::exit(plasmaskin::cli::run());
}
