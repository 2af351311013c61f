fn main() {
    std::process::exit(koca_cli::run(std::env::args_os()));
}
