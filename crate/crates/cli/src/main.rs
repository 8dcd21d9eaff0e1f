use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use rgg_cli::{exit_code, run, Cli, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.common.out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_USAGE as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    match run(&cli) {
        Ok(output) => {
            if let Err(e) = emit(&cli, &output.text) {
                eprintln!("rgg: cannot write output: {e}");
                return ExitCode::from(EXIT_USAGE as u8);
            }
            ExitCode::from(if output.validation_failed {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            } as u8)
        }
        Err(e) => {
            eprintln!("rgg: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
