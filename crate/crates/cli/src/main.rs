mod args;
mod commands;
mod meta;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use crate::commands::Usage;

/// Exit status for a failed run: 2 for malformed input or configuration,
/// 3 for well-formed input that fails validation, 4 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    use cloudskel::Error as E;
    for cause in err.chain() {
        if cause.is::<Usage>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Parse { .. } | E::NotSquare { .. } | E::Json(_) | E::Csv(_) => 2,
                E::Io(_) => 4,
                _ => 3,
            };
        }
    }
    4
}

fn broken_pipe(err: &anyhow::Error) -> bool {
    use std::io::ErrorKind::BrokenPipe;
    err.chain().any(|c| {
        c.downcast_ref::<std::io::Error>().is_some_and(|e| e.kind() == BrokenPipe)
            || c.downcast_ref::<serde_json::Error>().and_then(|e| e.io_error_kind()) == Some(BrokenPipe)
            || matches!(c.downcast_ref::<cloudskel::Error>(), Some(cloudskel::Error::Io(e)) if e.kind() == BrokenPipe)
    })
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        // stdout closed early, e.g. piped into `head`
        Err(err) if broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
