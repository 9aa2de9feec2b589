fn main() {
    std::process::exit(polylift::cli::run(std::env::args_os()));
}
