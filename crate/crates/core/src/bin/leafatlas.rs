fn main() {
    std::process::exit(leafatlas::cli::main_with_args(std::env::args_os()));
}
