fn main() {
    std::process::exit(geospin::cli::run(std::env::args_os()));
}
