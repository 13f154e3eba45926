use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use platfloer::cli::{run, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    match run(&cfg) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("platfloer: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
