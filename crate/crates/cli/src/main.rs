use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = qhj_cli::run(std::env::args_os());
    for line in &outcome.summary {
        if outcome.code == 2 {
            eprintln!("{}", line.trim_end());
        } else {
            println!("{}", line.trim_end());
        }
    }
    ExitCode::from(outcome.code)
}
