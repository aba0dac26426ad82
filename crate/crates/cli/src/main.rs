fn main() {
    std::process::exit(fuchsian_cli::main_with(std::env::args_os()));
}
