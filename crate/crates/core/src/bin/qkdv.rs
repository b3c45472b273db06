fn main() {
    std::process::exit(qkdv::cli::main_with_args(std::env::args()));
}
