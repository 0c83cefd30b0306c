use clap::Parser;
use spinring_cli::Cli;
use std::process::ExitCode;

fn main() -> ExitCode {
    spinring_cli::run(Cli::parse())
}
