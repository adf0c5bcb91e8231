use std::process::ExitCode;

use clap::Parser;
use mirror_gw::args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match mirror_gw::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("mirror-gw: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
