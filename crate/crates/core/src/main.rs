use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(nearmiss::cli::run())
}
