fn main() {
    std::process::exit(qbrach_cli::main_with_args(std::env::args_os()));
}
