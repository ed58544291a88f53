fn main() {
    std::process::exit(ncring::cli::run(std::env::args_os()));
}
