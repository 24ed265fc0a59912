fn main() -> std::process::ExitCode {
    sisgkp::cli::main()
}
