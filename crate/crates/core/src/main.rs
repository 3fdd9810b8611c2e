fn main() {
    std::process::exit(curvem::cli::run_cli(std::env::args_os()));
}
