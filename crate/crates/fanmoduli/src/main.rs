fn main() {
    std::process::exit(fanmoduli::cli::run(std::env::args_os()));
}
