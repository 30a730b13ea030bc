fn main() {
    std::process::exit(tpath::cli::run(std::env::args_os()));
}
