fn main() {
    std::process::exit(pulsetrain::cli::execute());
}
