use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(netab::cli::run(std::env::args_os()) as u8)
}
