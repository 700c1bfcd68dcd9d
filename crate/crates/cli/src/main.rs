fn main() {
    std::process::exit(pierce_cli::run(std::env::args_os()));
}
