//! `qmodular`: command-line front end for the level-20 verifier.

mod args;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use run::Failure;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run::run(&cli.command, &cli.config) {
        Ok(r) => r,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {}", e.0);
            return ExitCode::from(2);
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {}", e.0);
            return ExitCode::from(1);
        }
    };
    let body = match cli.config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json(&cli.config)).expect("json");
            s.push('\n');
            s
        }
        Format::Text => report.to_text(),
    };
    let written = match &cli.config.out {
        Some(path) => std::fs::write(path, &body),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
