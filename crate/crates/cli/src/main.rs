fn main() {
    std::process::exit(rosette_cli::run(std::env::args_os()));
}
