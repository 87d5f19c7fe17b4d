fn main() {
    std::process::exit(clifft::cli::main_with_args(std::env::args_os()));
}
