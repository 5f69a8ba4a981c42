fn main() {
    std::process::exit(ocrnoise::cli::run(std::env::args_os()));
}
