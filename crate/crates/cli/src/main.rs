use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lehmer_cli::run(std::env::args_os()))
}
