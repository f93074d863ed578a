fn main() {
    std::process::exit(algodyn::cli::main_with_args(std::env::args_os()));
}
