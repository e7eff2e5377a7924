fn main() {
    std::process::exit(ttolab::cli::main_with_args(std::env::args_os()));
}
