fn main() -> std::process::ExitCode {
    chardist::cli::run()
}
