fn main() {
    std::process::exit(foliation::cli::run(std::env::args_os()));
}
