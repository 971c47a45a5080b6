fn main() -> std::process::ExitCode {
    intent_rag::service::cli::main()
}
