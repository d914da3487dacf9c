use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = normpar::cli::run(std::env::args_os());
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    if !outcome.stdout.is_empty() {
        let _ = writeln!(std::io::stdout().lock(), "{}", outcome.stdout);
    }
    if !outcome.stderr.is_empty() {
        let _ = writeln!(std::io::stderr().lock(), "{}", outcome.stderr);
    }
    ExitCode::from(outcome.code)
}
