fn main() {
    std::process::exit(bellrand::cli::main());
}
