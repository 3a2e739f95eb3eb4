fn main() {
    std::process::exit(beamspace::cli::main_with_env());
}
