fn main() {
    std::process::exit(drsrd_simbench::cli::run(std::env::args_os()));
}
