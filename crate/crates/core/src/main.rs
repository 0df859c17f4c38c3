fn main() {
    std::process::exit(permbin::cli::run());
}
