use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use wsd_core::cli::{execute, Cli};
use wsd_core::WsdError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((text, to_file)) => {
            if !to_file {
                match io::stdout().lock().write_all(text.as_bytes()) {
                    Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                        eprintln!("error: {e}");
                        return ExitCode::FAILURE;
                    }
                    _ => {}
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            // Wrapping variants already print their cause.
            eprintln!("error: {e}");
            match e {
                WsdError::Config(_) | WsdError::Generator(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
