fn main() {
    std::process::exit(gf2hash::cli::run(std::env::args_os()));
}
