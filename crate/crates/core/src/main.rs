fn main() {
    std::process::exit(capaflat::cli::run(std::env::args_os()));
}
