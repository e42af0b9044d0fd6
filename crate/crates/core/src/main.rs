fn main() {
    std::process::exit(tracelab::cli::main_with_args(std::env::args_os()));
}
