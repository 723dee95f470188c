fn main() {
    std::process::exit(entropy_lab_cli::run(std::env::args_os()));
}
