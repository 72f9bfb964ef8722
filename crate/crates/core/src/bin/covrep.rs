fn main() {
    std::process::exit(covrep::cli::run(std::env::args_os()));
}
