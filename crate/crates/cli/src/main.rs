fn main() {
    std::process::exit(logrank_cli::main_with_args(std::env::args_os()));
}
