fn main() {
    std::process::exit(hyperkernel::cli::run(std::env::args_os()));
}
