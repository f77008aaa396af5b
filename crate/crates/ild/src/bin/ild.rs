fn main() {
    std::process::exit(ild::cli::run(std::env::args_os()));
}
