fn main() -> std::process::ExitCode {
    hcorr::cli::main()
}
