fn main() -> std::process::ExitCode {
    courant_vpa::cli::run(std::env::args_os())
}
