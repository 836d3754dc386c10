//! `dupzero`: command-line front end for constructing, encoding, decoding
//! and analysing zero-error codes for duplication and 0-insertion channels.

mod args;
mod commands;
mod error;
mod io;

use std::io::{BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdin = std::io::stdin().lock();
    let mut out = BufWriter::new(std::io::stdout().lock());
    let result = commands::run(cli.command, cli.format, stdin, &mut out).and_then(|()| Ok(out.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("dupzero: {e}");
            e.exit_code()
        }
    }
}
