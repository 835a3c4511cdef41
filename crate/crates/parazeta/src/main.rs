use std::panic;
use std::process::ExitCode;

use clap::Parser;
use parazeta::cli::{execute, exit, exit_code, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code = match panic::catch_unwind(|| execute(&cli, args)) {
        Ok(Ok(o)) => {
            print!("{}", o.stdout);
            if o.passed {
                exit::OK
            } else {
                exit::FAILED
            }
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        Err(_) => exit::INTERNAL,
    };
    ExitCode::from(code as u8)
}
