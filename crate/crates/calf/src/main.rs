fn main() {
    std::process::exit(calf::cli::main_with_args(std::env::args_os()));
}
