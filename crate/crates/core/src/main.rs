use std::process::ExitCode;

fn main() -> ExitCode {
    fisheye::cli::main_from_args(std::env::args_os())
}
