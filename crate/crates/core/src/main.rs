use std::process::ExitCode;

fn main() -> ExitCode {
    tvtrans::cli::run()
}
