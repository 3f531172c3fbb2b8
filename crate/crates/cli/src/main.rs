use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use localchern_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are validation errors; help and version succeed.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli.command, &cli.flags) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("{w}");
            }
            if let Some(cause) = &outcome.report.cause {
                eprintln!("FAIL: {cause}");
            }
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.render(cli.flags.format).as_bytes());
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
