fn main() {
    std::process::exit(manin::cli::main_with_args(std::env::args_os()));
}
