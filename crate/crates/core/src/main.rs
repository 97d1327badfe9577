fn main() {
    std::process::exit(shamap::cli::run(std::env::args_os()));
}
