fn main() -> std::process::ExitCode {
    infocap_cli::run(std::env::args_os())
}
