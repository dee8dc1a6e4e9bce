fn main() {
    std::process::exit(commutant::cli::run_from(std::env::args_os()));
}
