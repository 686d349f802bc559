//! `qgenocchi` command-line front end.
//!
//! Every command writes one canonical JSON envelope (or CSV for `table
//! --format csv`) to stdout and diagnostics to stderr. Exit codes: 0 ok,
//! 1 usage, 2 domain, 3 numeric (pole, divergence, budget), 4 audit failure.

mod args;
mod commands;
mod envelope;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;
use envelope::Exit;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Exit::Ok.into(),
                _ => Exit::Usage.into(),
            };
        }
    };
    let out: Outcome = match &cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Table(a) => commands::table(a),
        Command::Verify(a) => commands::verify(a),
        Command::Zeta(a) => commands::zeta(a),
        Command::Limit(a) => commands::limit(a),
    };
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is the reader's business, not an evaluation failure
    let _ = stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush());
    for d in &out.diagnostics {
        eprintln!("{d}");
    }
    out.exit.into()
}
