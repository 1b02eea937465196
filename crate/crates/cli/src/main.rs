fn main() {
    std::process::exit(whittaker_cli::run(std::env::args_os()));
}
