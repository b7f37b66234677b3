fn main() {
    std::process::exit(permlike::cli::run(std::env::args_os()));
}
