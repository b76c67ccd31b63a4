fn main() {
    std::process::exit(universal_sharing::cli::main_with_args(std::env::args_os()));
}
