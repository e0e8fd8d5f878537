use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lambda_sieve::{run, Cli, Format};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return ExitCode::from(code as u8);
        }
    };
    let rendered = match run(&cli) {
        Ok(r) => r,
        Err(err) => {
            eprintln!("lambda-sieve: {err}");
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &rendered.body),
        None => std::io::stdout().lock().write_all(rendered.body.as_bytes()),
    };
    if let Err(err) = written {
        eprintln!("lambda-sieve: writing output: {err}");
        return ExitCode::from(1);
    }
    if cli.common.format != Format::Text || cli.common.out.is_some() {
        if let Some(summary) = &rendered.summary {
            eprintln!("{summary}");
        }
    }
    if rendered.success {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
