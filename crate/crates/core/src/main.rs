fn main() {
    std::process::exit(dislocation_phase::cli::run(std::env::args_os()));
}
