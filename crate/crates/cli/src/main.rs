fn main() {
    std::process::exit(polarlift_cli::cli::main_with_args(std::env::args_os()));
}
