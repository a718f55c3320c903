fn main() {
    std::process::exit(eqop::cli::main_with_args(std::env::args_os()));
}
