use std::process::ExitCode;

fn main() -> ExitCode {
    transversal::cli::run()
}
