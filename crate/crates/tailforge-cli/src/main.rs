use std::io;
use std::process::ExitCode;

use clap::Parser;
use tailforge_cli::config::{Cli, RunConfig, CACHE_ENV};
use tailforge_cli::run::run;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::from_cli(cli, std::env::var_os(CACHE_ENV).map(Into::into)) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let code = run(&cfg, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
