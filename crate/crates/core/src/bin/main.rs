fn main() {
    std::process::exit(kodaira_kit::cli::run(std::env::args_os()));
}
