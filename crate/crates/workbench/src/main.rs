use std::process::ExitCode;

use clap::Parser;
use quantale_workbench::cli::{exit_code_for, run, Cli, OutputFormat};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            println!("{}", report.render(cli.format));
            ExitCode::from(if report.passed() { 0 } else { 1 })
        }
        Err(e) => {
            let code = exit_code_for(&e);
            match cli.format {
                OutputFormat::Json => println!(
                    "{}",
                    serde_json::json!({ "error": e.to_string(), "exit_code": code })
                ),
                OutputFormat::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(code as u8)
        }
    }
}
