use std::process::ExitCode;

use clap::Parser;

use binquad::cli::{run, Cli};

fn main() -> ExitCode {
    let config = Cli::parse().into_config();
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match report.render(config.format) {
        Ok(out) => print!("{out}"),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
