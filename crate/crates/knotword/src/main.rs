fn main() {
    std::process::exit(knotword::cli::run(std::env::args_os()));
}
