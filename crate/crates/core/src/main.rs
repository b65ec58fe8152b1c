fn main() -> std::process::ExitCode {
    dual_minkowski::cli::main()
}
