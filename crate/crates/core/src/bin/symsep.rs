use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(symsep::cli::run() as u8)
}
