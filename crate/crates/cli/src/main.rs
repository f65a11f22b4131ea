fn main() {
    std::process::exit(graphonlab_cli::main_with_args(std::env::args_os()));
}
