fn main() {
    std::process::exit(lgspin::cli::main_with_args(std::env::args_os()));
}
