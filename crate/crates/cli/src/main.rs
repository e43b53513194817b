mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::Parser;
use steane_rc::ExecMode;

use config::{resolve, Cli};
use error::Result;

fn exec_mode(workers: Option<usize>) -> Result<ExecMode> {
    if workers == Some(1) {
        return Ok(ExecMode::Sequential);
    }
    #[cfg(feature = "parallel")]
    if let Some(n) = workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| error::config_err(format!("workers: {e}")))?;
    }
    Ok(ExecMode::Parallel)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = resolve(cli.command, &cli.opts)?;
    let mode = exec_mode(cfg.workers)?;
    commands::execute(&cfg, mode)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
