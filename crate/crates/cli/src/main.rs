//! `dpcd`: run DPCD and its baselines on problem files or synthetic instances.
//!
//! Exit status is 0 on success, 1 on numeric failure and 2 on usage or
//! validation errors.

mod args;
mod commands;
mod failure;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Subgraph(a) => commands::subgraph::run(a),
        Command::Hash(a) => commands::hash::run(a),
        Command::Quad(a) => commands::quad::run(a),
        Command::Oracle(a) => commands::oracle::run(a),
        Command::Bench(a) => commands::bench::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
