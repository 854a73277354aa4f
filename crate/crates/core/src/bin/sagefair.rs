fn main() {
    std::process::exit(sagefair::cli::run(std::env::args_os()));
}
