use std::process::ExitCode;

fn main() -> ExitCode {
    densverify::cli::main()
}
