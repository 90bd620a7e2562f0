fn main() {
    std::process::exit(tsbound::cli::run(std::env::args_os()));
}
