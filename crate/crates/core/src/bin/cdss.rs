fn main() {
    std::process::exit(cdss::cli::run(std::env::args_os()));
}
