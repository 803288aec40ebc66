fn main() {
    thompson_core::cli::init_logging();
    std::process::exit(thompson_core::cli::main_with_args(std::env::args_os()));
}
