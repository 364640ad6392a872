fn main() -> std::process::ExitCode {
    ifcwod::cli::run()
}
