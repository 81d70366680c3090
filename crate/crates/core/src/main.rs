fn main() {
    std::process::exit(qprenex::cli::run(std::env::args_os()));
}
