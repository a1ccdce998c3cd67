fn main() {
    std::process::exit(ksquares::cli::run(std::env::args_os()));
}
