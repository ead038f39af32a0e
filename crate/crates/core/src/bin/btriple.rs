fn main() {
    std::process::exit(boundary_triples::cli::main_with_args(std::env::args_os()));
}
