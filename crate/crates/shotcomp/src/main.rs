fn main() {
    std::process::exit(shotcomp::cli::main_with_args(std::env::args_os()));
}
