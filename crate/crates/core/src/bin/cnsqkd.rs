use std::process::ExitCode;

fn main() -> ExitCode {
    cnsqkd::cli::main_with_args(std::env::args_os())
}
