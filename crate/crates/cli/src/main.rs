use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lenstight_cli::{execute, exit_code, render_json, render_text, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(report) => {
            let text = if cli.json {
                render_json(&report)
            } else {
                render_text(&report, cli.quiet)
            };
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not an error worth reporting
            let _ = stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
