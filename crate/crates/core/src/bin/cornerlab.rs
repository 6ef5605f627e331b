fn main() {
    std::process::exit(cornerlab::cli::main_with_args(std::env::args_os()));
}
