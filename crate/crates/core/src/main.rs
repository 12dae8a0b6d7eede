use std::process::ExitCode;

use clap::Parser;
use uc_chp::cli::{exit_code, run, Cli};
use uc_chp::Error;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(&cli, &mut stdout) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            if let Error::Validation(diags) = &err {
                for d in diags {
                    eprintln!("  {d}");
                }
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
