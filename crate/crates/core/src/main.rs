fn main() {
    std::process::exit(maupertuis::cli::main_with_args(std::env::args_os()));
}
