fn main() {
    std::process::exit(shannon_cwt::cli::run(std::env::args_os()));
}
