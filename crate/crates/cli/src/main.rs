use std::process::ExitCode;

use clap::Parser;
use kgbb_cli::Cli;
use tracing_subscriber::EnvFilter;

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt().with_env_filter(EnvFilter::from_default_env()).with_writer(std::io::stderr).init();
    kgbb_cli::run(Cli::parse()).await
}
