use std::process::ExitCode;

use clap::Parser;
use rbf_shape::cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = cli.command.flags();
    let output = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &flags.out {
        Some(path) => std::fs::write(path, &output.body),
        None => {
            print!("{}", output.body);
            Ok(())
        }
    };
    let written = written.and_then(|_| match (&flags.svg, &output.svg) {
        (Some(path), Some(svg)) => std::fs::write(path, svg),
        _ => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if output.exit_code == 4 {
        eprintln!("warning: at least one run was inconclusive (conditioning)");
    }
    ExitCode::from(output.exit_code as u8)
}
