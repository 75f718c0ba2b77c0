use std::process::ExitCode;

fn main() -> ExitCode {
    auxbandit::cli::run()
}
