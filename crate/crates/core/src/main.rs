fn main() -> std::process::ExitCode {
    kaczeta::cli::run()
}
