use clap::Parser;
use lichnerowicz_cli::{run, Args, CliError, RunConfig, EXIT_PARSE};
use std::process::ExitCode;

/// Thread-count override for the data-parallel kernels.
const THREADS_ENV: &str = "LICHNEROWICZ_THREADS";

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| CliError::Parse(format!("{THREADS_ENV}={v} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Parse(format!("{THREADS_ENV}: {e}")))
}

fn main_inner() -> Result<i32, CliError> {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return Ok(code);
        }
    };
    init_threads()?;
    let cfg = RunConfig::from_args(args)?;
    let outcome = run(&cfg)?;
    let json = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, json + "\n")?;
            std::fs::write(path.with_extension("csv"), &outcome.csv)?;
            print!("{}", outcome.csv);
        }
        None => println!("{json}"),
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
