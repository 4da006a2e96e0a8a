fn main() {
    std::process::exit(ghforge::cli::run_cli());
}
