fn main() {
    std::process::exit(risrate::cli::main_with_args(std::env::args_os()));
}
