fn main() {
    std::process::exit(csr_cli::main_with_args(std::env::args_os()));
}
