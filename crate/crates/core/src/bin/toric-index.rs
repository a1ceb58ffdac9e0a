fn main() {
    std::process::exit(toric_index::cli::main_with_args(std::env::args_os()));
}
