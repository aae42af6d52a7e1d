use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use resolvent_cli::{run, Args, RunRequest};

/// Exit status for malformed input.
const PARSE_ERROR: u8 = 2;

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(PARSE_ERROR);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let request = match RunRequest::from_args(&args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(PARSE_ERROR);
        }
    };
    let report = run(&request, args.cache_dir.as_deref());
    for (stage, t) in report.timings() {
        eprintln!("time: {stage}: {:.3}s", t.as_secs_f64());
    }
    let mut out = std::io::stdout().lock();
    if out.write_all(report.render().as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::FAILURE;
    }
    ExitCode::from(report.status().exit_code() as u8)
}
