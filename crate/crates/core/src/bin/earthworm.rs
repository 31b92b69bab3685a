fn main() {
    std::process::exit(earthworm::cli::main_with_args(std::env::args_os()));
}
