use std::process::ExitCode;

fn main() -> ExitCode {
    quditbell::cli::main_with_args(std::env::args_os())
}
