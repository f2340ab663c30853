fn main() {
    std::process::exit(isb_cli::main_with(std::env::args_os()));
}
