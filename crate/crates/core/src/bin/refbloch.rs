fn main() {
    std::process::exit(refbloch::cli::main_with_args(std::env::args_os()));
}
