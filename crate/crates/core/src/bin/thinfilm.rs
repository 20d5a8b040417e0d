fn main() {
    std::process::exit(thinfilm::cli::main_with_args(std::env::args_os()));
}
