use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = cohen_lenstra::cli::run_args(std::env::args_os());
    if outcome.code == 0 {
        print!("{}", outcome.output);
    } else {
        eprint!("{}", outcome.output);
    }
    ExitCode::from(outcome.code as u8)
}
